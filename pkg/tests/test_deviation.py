import numpy as np
import pytest

from gravnoise.background import BackgroundSpec, ModeEnsemble, evaluate_perturbation, make_tt_mode
from gravnoise.deviation import (
    DeviationState,
    closed_form_deviation,
    curvature_at,
    integrate_deviation,
    oscillation_frequency,
    phase_accumulation,
)
from gravnoise.errors import PrecisionError, UnstableRegimeError
from gravnoise.tensors import SpacetimePoint


def geo_spec(**kw):
    base = dict(mode_count=1, strain_rms=1e-2, f_min=0.5, f_max=2.0, light_speed=1.0)
    base.update(kw)
    return BackgroundSpec(**base)


def test_curvature_empty_ensemble_is_zero():
    ens = ModeEnsemble([], 0, geo_spec())
    r = curvature_at(ens, SpacetimePoint(0.0, 0.0, 0.0, 0.0))
    assert np.all(r.matrix == 0.0)


def test_curvature_matches_finite_difference_of_h():
    mode = make_tt_mode([0, 0, 1.0], 1.0, 0.01, 0.0, phase=0.3, light_speed=1.0)
    ens = ModeEnsemble([mode], 0, geo_spec())
    p = SpacetimePoint(0.13, 0.2, -0.4, 0.55)
    got = curvature_at(ens, p).matrix

    # five-point second time derivative of the evaluated field
    dt = 1e-2 / mode.angular_frequency(1.0)
    samples = [
        evaluate_perturbation(ens, SpacetimePoint(p.t + k * dt, p.x, p.y, p.z)).matrix[1:, 1:]
        for k in (-2, -1, 0, 1, 2)
    ]
    d2 = (-samples[0] + 16 * samples[1] - 30 * samples[2] + 16 * samples[3] - samples[4]) / (
        12 * dt**2
    )
    expected = -0.5 * d2  # c = 1
    assert np.abs(got - expected).max() < 1e-8 * np.abs(expected).max()


def test_curvature_is_symmetric():
    ens = ModeEnsemble(
        [make_tt_mode([0.4, 0.5, 0.3], 1.7, 0.01, 0.02j, light_speed=1.0)], 0, geo_spec()
    )
    r = curvature_at(ens, SpacetimePoint(0.4, 0.1, 0.2, 0.3)).matrix
    assert np.abs(r - r.T).max() < 1e-14


def test_oscillation_frequency_values():
    assert oscillation_frequency(4.0, light_speed=1.0) == pytest.approx(2.0)
    assert oscillation_frequency(0.0, light_speed=1.0) == 0.0


def test_oscillation_frequency_unstable_signal():
    with pytest.raises(UnstableRegimeError) as exc:
        oscillation_frequency(-1.0, light_speed=1.0)
    assert exc.value.magnitude == pytest.approx(1.0)


def test_closed_form_trivials():
    assert closed_form_deviation(2.0, 3.0, 0.0) == 2.0
    assert closed_form_deviation(2.0, 1.0, np.pi) == pytest.approx(-2.0)
    for t in (0.1, 1.7, 12.0):
        assert abs(closed_form_deviation(2.0, 1.3, t)) == pytest.approx(2.0)


def test_integrate_zero_curvature_constant():
    zero = np.zeros((3, 3))
    traj = integrate_deviation(
        DeviationState([1.0, -2.0, 0.5], [0, 0, 0]), lambda t: zero, 0.1, 50, light_speed=1.0
    )
    assert len(traj) == 51
    assert np.allclose(traj[-1].ell, [1.0, -2.0, 0.5])


def test_integrate_zero_curvature_free_motion():
    zero = np.zeros((3, 3))
    traj = integrate_deviation(
        DeviationState([0.0, 0.0, 0.0], [1.0, 2.0, -1.0]), lambda t: zero, 0.1, 100,
        light_speed=1.0,
    )
    assert np.allclose(traj[-1].ell, [10.0, 20.0, -10.0], rtol=1e-12)
    assert traj[-1].tau == pytest.approx(10.0)


def test_integrate_matches_closed_form_over_ten_periods():
    k = 4.0
    omega = np.sqrt(k)
    period = 2 * np.pi / omega
    const = np.diag([k, 0.0, 0.0])
    dt = period / 1000
    traj = integrate_deviation(
        DeviationState([1.0, 0, 0], [0, 0, 0]), lambda t: const, dt, 10_000, light_speed=1.0
    )
    ts = np.array([s.tau for s in traj])
    xs = np.array([s.ell[0] for s in traj])
    exact = np.array([closed_form_deviation(1.0, omega, t).real for t in ts])
    assert np.abs(xs - exact).max() < 1e-6


def test_integrate_fourth_order_convergence():
    k = 4.0
    omega = np.sqrt(k)
    period = 2 * np.pi / omega
    const = np.diag([k, 0.0, 0.0])
    errs = []
    for div in (250, 500):
        dt = period / div
        traj = integrate_deviation(
            DeviationState([1.0, 0, 0], [0, 0, 0]), lambda t: const, dt, 10 * div,
            light_speed=1.0,
        )
        ts = np.array([s.tau for s in traj])
        xs = np.array([s.ell[0] for s in traj])
        errs.append(np.abs(xs - np.cos(omega * ts)).max())
    order = np.log2(errs[0] / errs[1])
    assert 3.8 < order < 4.2


def test_integrate_is_linear_in_initial_separation():
    const = np.diag([2.0, 1.0, 0.5])
    alpha = 3.7
    a = integrate_deviation(
        DeviationState([1.0, 0.2, -0.4], [0, 0.1, 0]), lambda t: const, 0.01, 200,
        light_speed=1.0,
    )
    b = integrate_deviation(
        DeviationState(alpha * np.array([1.0, 0.2, -0.4]), alpha * np.array([0, 0.1, 0])),
        lambda t: const, 0.01, 200, light_speed=1.0,
    )
    for sa, sb in zip(a, b):
        assert np.abs(sb.ell - alpha * sa.ell).max() <= 1e-12 * max(np.abs(sb.ell).max(), 1.0)


def test_integrate_resolution_guard():
    const = np.diag([400.0, 0.0, 0.0])  # omega = 20 with c = 1
    with pytest.raises(PrecisionError) as exc:
        integrate_deviation(
            DeviationState([1, 0, 0], [0, 0, 0]), lambda t: const, 0.01, 10, light_speed=1.0
        )
    assert exc.value.suggestion is not None
    assert exc.value.suggestion < 0.01


def test_phase_accumulation_zero_time():
    ens = ModeEnsemble(
        [make_tt_mode([0, 0, 1.0], 1.0, 0.01, 0.0, light_speed=1.0)], 0, geo_spec()
    )
    acc = phase_accumulation(ens, SpacetimePoint(0, 0, 0, 0), 0.0)
    assert np.all(acc.phases == 0.0)


def test_phase_accumulation_linear_in_time():
    # negative plus amplitude puts R_xx > 0 at the origin for this basis
    ens = ModeEnsemble(
        [make_tt_mode([0, 0, 1.0], 1.0, -0.01, 0.0, light_speed=1.0)], 0, geo_spec()
    )
    p = SpacetimePoint(0.0, 0.0, 0.0, 0.0)
    one = phase_accumulation(ens, p, 1.0)
    two = phase_accumulation(ens, p, 2.0)
    assert one.stable[0]
    assert one.phases[0] > 0.0
    assert two.phases[0] == pytest.approx(2.0 * one.phases[0])


def test_phase_accumulation_batch_contract():
    from gravnoise.background import generate_background

    ens = generate_background(geo_spec(mode_count=100), 13)
    acc = phase_accumulation(ens, SpacetimePoint(0.3, 1.0, 2.0, 3.0), 5.0)
    assert acc.phases.shape == (100,)
    assert np.all(acc.phases[acc.stable] >= 0.0)
    assert np.all(acc.phases[~acc.stable] == 0.0)


def test_phase_accumulation_negative_time_rejected():
    ens = ModeEnsemble([], 0, geo_spec())
    with pytest.raises(ValueError):
        phase_accumulation(ens, SpacetimePoint(0, 0, 0, 0), -1.0)
