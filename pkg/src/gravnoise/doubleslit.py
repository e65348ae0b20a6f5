"""Monte Carlo two-slit interference with metric-modulated path amplitudes.

Each arm j carries the unperturbed amplitude <x|s>_j times the factor
(1 + h(j)), where h(j) is the path average of the diagonal metric
perturbation sum_a h_aa / 4 along the source -> slit -> screen polyline.
Exactly transverse-traceless backgrounds have a vanishing diagonal sum, so
this amplitude coupling is inert for generated ensembles; the optional
"amplitude_phase" coupling additionally shifts each arm's phase by the
perturbed minus flat invariant path length accumulated along the polyline,
which is where a TT background actually registers.

Geometry: the source sits at the origin, slits at (+-d/2, 0, L1), screen
points at (x, 0, L1 + L2).  Screen positions are built as exact +-pairs so
symmetric configurations are symmetric to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .background import BackgroundSpec, ModeEnsemble, evaluate_packed, generate_background
from .errors import ConfigError, LinearizationError
from .seeding import substream_seed
from .tensors import DIAG_SLOTS, interval_squared_packed, minkowski

COUPLINGS = ("amplitude", "amplitude_phase")


@dataclass(frozen=True)
class SlitGeometry:
    """Two-slit layout; lengths in meters."""

    L1: float
    L2: float
    d: float
    w: float = 0.0
    screen_extent: float = 1.0
    screen_samples: int = 256

    def validation_errors(self) -> list[str]:
        errs = []
        if not self.L1 > 0.0:
            errs.append("geometry.L1: must be > 0")
        if not self.L2 > 0.0:
            errs.append("geometry.L2: must be > 0")
        if not self.d > 0.0:
            errs.append("geometry.d: must be > 0")
        if self.w < 0.0:
            errs.append("geometry.w: must be >= 0")
        if not self.screen_extent > 0.0:
            errs.append("geometry.screen_extent: must be > 0")
        if self.screen_samples < 16:
            errs.append("geometry.screen_samples: must be >= 16")
        return errs

    def validate(self) -> None:
        errs = self.validation_errors()
        if errs:
            raise ConfigError(errs)

    def screen_positions(self) -> np.ndarray:
        """Sample positions across the screen, exactly mirror symmetric."""
        p = self.screen_samples
        step = self.screen_extent / (p - 1)
        return (np.arange(p) - (p - 1) / 2.0) * step

    def slit_x(self, slit: int) -> float:
        if slit not in (1, 2):
            raise ValueError("slit must be 1 or 2")
        return +0.5 * self.d if slit == 1 else -0.5 * self.d


@dataclass(frozen=True)
class PathAmplitude:
    """Baseline arm amplitude and its metric modulation."""

    baseline: complex
    modulation: float
    perturbed: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "perturbed", (1.0 + self.modulation) * self.baseline)


@dataclass(frozen=True)
class SlitExperiment:
    """Full description of a Monte Carlo double-slit run."""

    geometry: SlitGeometry
    wavelength: float
    background: BackgroundSpec
    realizations: int
    seed: int
    speed: float
    emit_time: float = 0.0
    quadrature_points: int = 16
    coupling: str = "amplitude"

    def validation_errors(self) -> list[str]:
        errs = self.geometry.validation_errors() + self.background.validation_errors()
        if not self.wavelength > 0.0:
            errs.append("slit.wavelength: must be > 0")
        if self.realizations < 2:
            errs.append("experiment.realizations: must be >= 2")
        if not self.speed > 0.0:
            errs.append("slit.speed: must be > 0")
        elif self.coupling == "amplitude_phase" and self.speed >= self.background.light_speed:
            errs.append("slit.speed: must be below light_speed for interval coupling")
        if self.quadrature_points < 1:
            errs.append("slit.quadrature_points: must be >= 1")
        if self.coupling not in COUPLINGS:
            errs.append(f"slit.coupling: must be one of {COUPLINGS}")
        return errs

    def validate(self) -> None:
        errs = self.validation_errors()
        if errs:
            raise ConfigError(errs)


@dataclass(frozen=True, eq=False)
class InterferenceResult:
    """Ensemble-averaged screen pattern with per-position standard errors."""

    positions: np.ndarray
    mean_intensity: np.ndarray
    stderr: np.ndarray
    realizations: int
    visibility: float
    seed: int
    coupling: str
    wavelength: float
    baseline_intensity: np.ndarray
    realization_deltas: np.ndarray | None = None


def free_amplitude(geom: SlitGeometry, slit: int, x_screen, wavelength: float):
    """Unit-magnitude two-path amplitude exp(2 pi i * path_length / lambda).

    With a finite slit width w the single-slit sinc envelope of the exit
    angle multiplies the amplitude.
    """
    if not wavelength > 0.0:
        raise ValueError("wavelength must be > 0")
    x = np.asarray(x_screen, dtype=float)
    xs = geom.slit_x(slit)
    seg1 = math.hypot(xs, geom.L1)
    seg2 = np.hypot(x - xs, geom.L2)
    amp = np.exp(2j * math.pi * (seg1 + seg2) / wavelength)
    if geom.w > 0.0:
        sin_theta = (x - xs) / seg2
        amp = amp * np.sinc(geom.w * sin_theta / wavelength)
    return amp if amp.ndim else complex(amp)


def perturbed_path_amplitude(baseline: complex, h_path: float) -> complex:
    """(1 + h) * baseline; |h| >= 1 leaves the linear regime."""
    if abs(h_path) >= 1.0:
        raise LinearizationError(
            f"path-averaged perturbation {h_path:.3e} is outside the linear regime"
        )
    return (1.0 + h_path) * baseline


def _segment_samples(start3, end3, n_sub, t_start, speed, light_speed):
    """Midpoint spacetime coordinates and 4-displacements of n_sub
    sub-intervals of one straight segment traversed at ``speed``."""
    start3 = np.asarray(start3, dtype=float)
    end3 = np.asarray(end3, dtype=float)
    delta = end3 - start3
    length = np.linalg.norm(delta, axis=-1)
    frac_mid = (np.arange(n_sub) + 0.5) / n_sub

    # broadcast position batch (if any) against the quadrature axis
    batch = np.broadcast_shapes(start3.shape[:-1], end3.shape[:-1])
    mids = np.empty(batch + (n_sub, 4))
    mids[..., 0] = light_speed * (
        t_start + (frac_mid * length[..., None]) / speed
    )
    mids[..., 1:] = start3[..., None, :] + frac_mid[:, None] * delta[..., None, :]

    dx4 = np.empty(batch + (n_sub, 4))
    seg_len = length[..., None] / n_sub
    dx4[..., 0] = light_speed * seg_len / speed
    dx4[..., 1:] = delta[..., None, :] / n_sub
    return mids, dx4, length


def _split_quadrature(n_quad: int) -> tuple[int, int]:
    n1 = max(1, n_quad // 2)
    return n1, max(1, n_quad - n1)


def _arm_samples(geom, slit, x_screen, t_emit, speed, light_speed, n_quad):
    """Quadrature samples for one arm: segment source->slit shared by all
    screen positions, segment slit->screen per position."""
    xs = geom.slit_x(slit)
    slit3 = np.array([xs, 0.0, geom.L1])
    n1, n2 = _split_quadrature(n_quad)
    mids1, dx1, len1 = _segment_samples(
        np.zeros(3), slit3, n1, t_emit, speed, light_speed
    )
    x = np.asarray(x_screen, dtype=float)
    screen3 = np.stack(
        [x, np.zeros_like(x), np.full_like(x, geom.L1 + geom.L2)], axis=-1
    )
    t_slit = t_emit + float(len1) / speed
    mids2, dx2, len2 = _segment_samples(slit3, screen3, n2, t_slit, speed, light_speed)
    return (mids1, dx1, float(len1)), (mids2, dx2, len2)


def _diag_mean(h_packed: np.ndarray) -> np.ndarray:
    """Mean over quadrature points of sum_a h_aa / 4."""
    trace4 = h_packed[..., list(DIAG_SLOTS)].sum(axis=-1) / 4.0
    return trace4.mean(axis=-1)


def path_averaged_h(
    ens: ModeEnsemble,
    geom: SlitGeometry,
    slit: int,
    x_screen,
    t_emit: float = 0.0,
    speed: float = 1.0,
    n_quad: int = 16,
):
    """Length-weighted path average of sum_a h_aa / 4 along one arm.

    The polyline is sampled with midpoint quadrature, ``n_quad`` points split
    between the two segments, with the traversal time advancing at ``speed``
    from ``t_emit``.  Accepts a scalar or an array of screen positions.
    """
    if not speed > 0.0:
        raise ValueError("speed must be > 0")
    c = ens.spec.light_speed
    scalar = np.ndim(x_screen) == 0
    x = np.atleast_1d(np.asarray(x_screen, dtype=float))
    (m1, _, l1), (m2, _, l2) = _arm_samples(geom, slit, x, t_emit, speed, c, n_quad)
    h1 = evaluate_packed(ens, m1.reshape(-1, 4)).reshape(m1.shape[:-1] + (10,))
    h2 = evaluate_packed(ens, m2.reshape(-1, 4)).reshape(m2.shape[:-1] + (10,))
    mean1 = _diag_mean(h1)
    mean2 = _diag_mean(h2)
    out = (l1 * mean1 + l2 * mean2) / (l1 + l2)
    return float(out[0]) if scalar else out


def _arm_path_length_shift(ens, dx4_list, mids_list, flat_ds2_list):
    """Perturbed minus flat invariant length along the sampled polyline."""
    shift = 0.0
    for dx4, mids, flat_ds2 in zip(dx4_list, mids_list, flat_ds2_list):
        h = evaluate_packed(ens, mids.reshape(-1, 4)).reshape(mids.shape[:-1] + (10,))
        ds2 = flat_ds2 + interval_squared_packed(h, dx4)
        if np.any(ds2 <= 0.0):
            raise LinearizationError(
                "perturbed interval is no longer timelike along the path"
            )
        shift = shift + (np.sqrt(ds2) - np.sqrt(flat_ds2)).sum(axis=-1)
    return shift


def screen_intensity(
    geom: SlitGeometry,
    wavelength: float,
    ens: ModeEnsemble | None = None,
    t_emit: float = 0.0,
    speed: float = 1.0,
    n_quad: int = 16,
    coupling: str = "amplitude",
) -> np.ndarray:
    """|A1 + A2|^2 across the screen for one background realization.

    ``ens=None`` gives the unperturbed baseline pattern.  For zero-strain
    ensembles the result is bit-identical to the baseline: the modulation
    and phase-shift terms evaluate to exact zeros.
    """
    geom.validate()
    if coupling not in COUPLINGS:
        raise ValueError(f"coupling must be one of {COUPLINGS}")
    x = geom.screen_positions()
    total = 0.0j * np.zeros(x.shape)
    eta_packed = minkowski().packed
    for slit in (1, 2):
        amp = np.asarray(free_amplitude(geom, slit, x, wavelength), dtype=complex)
        if ens is not None:
            (m1, dx1, _), (m2, dx2, _) = _arm_samples(
                geom, slit, x, t_emit, speed, ens.spec.light_speed, n_quad
            )
            h_mean = path_averaged_h(
                ens, geom, slit, x, t_emit=t_emit, speed=speed, n_quad=n_quad
            )
            if np.any(np.abs(h_mean) >= 1.0):
                raise LinearizationError(
                    "path-averaged perturbation is outside the linear regime"
                )
            amp = (1.0 + h_mean) * amp
            if coupling == "amplitude_phase":
                flat1 = interval_squared_packed(
                    np.broadcast_to(eta_packed, m1.shape[:-1] + (10,)), dx1
                )
                flat2 = interval_squared_packed(
                    np.broadcast_to(eta_packed, m2.shape[:-1] + (10,)), dx2
                )
                if np.any(flat1 <= 0.0) or np.any(flat2 <= 0.0):
                    raise LinearizationError("traversal must be timelike (speed < c)")
                shift = _arm_path_length_shift(
                    ens, (dx1, dx2), (m1, m2), (flat1, flat2)
                )
                amp = amp * np.exp(2j * math.pi * shift / wavelength)
        total = total + amp
    return np.abs(total) ** 2


def fringe_visibility(
    intensity,
    positions: np.ndarray | None = None,
    fringe_spacing: float | None = None,
) -> float:
    """(I_max - I_min) / (I_max + I_min), by default over the whole array.

    When ``positions`` and ``fringe_spacing`` are given, the extrema are
    taken over the central five fringes, |x| <= 2.5 * spacing.
    """
    values = np.asarray(intensity, dtype=float)
    if values.size < 16:
        raise ValueError("need at least 16 intensity samples")
    if positions is not None and fringe_spacing is not None:
        window = np.abs(np.asarray(positions)) <= 2.5 * fringe_spacing
        if window.sum() >= 2:
            values = values[window]
    vmax = values.max()
    if not vmax > 0.0:
        raise ValueError("visibility undefined for a flat zero pattern")
    vmin = values.min()
    return float((vmax - vmin) / (vmax + vmin))


def monte_carlo_pattern(
    experiment: SlitExperiment, keep_realizations: bool = False
) -> InterferenceResult:
    """Average the screen pattern over seeded background realizations.

    Realization r uses the substream seed splitmix64(seed, r).  Accumulation
    runs over per-realization deviations from the baseline pattern with
    exact (fsum) summation, so results are independent of accumulation
    order and a zero-strain run reproduces the baseline bit for bit.
    """
    experiment.validate()
    geom = experiment.geometry
    x = geom.screen_positions()
    baseline = screen_intensity(geom, experiment.wavelength)
    n_real = experiment.realizations
    deltas = np.empty((n_real, x.size))
    for r in range(n_real):
        seed_r = substream_seed(experiment.seed, r)
        ens = generate_background(experiment.background, seed_r)
        pattern = screen_intensity(
            geom,
            experiment.wavelength,
            ens,
            t_emit=experiment.emit_time,
            speed=experiment.speed,
            n_quad=experiment.quadrature_points,
            coupling=experiment.coupling,
        )
        deltas[r] = pattern - baseline

    delta_mean = np.array([math.fsum(deltas[:, p]) for p in range(x.size)]) / n_real
    mean = baseline + delta_mean
    centered = deltas - delta_mean
    var = np.array([math.fsum(centered[:, p] ** 2) for p in range(x.size)])
    stderr = np.sqrt(var / (n_real - 1) / n_real)

    spacing = experiment.wavelength * geom.L2 / geom.d
    vis = fringe_visibility(mean, positions=x, fringe_spacing=spacing)
    return InterferenceResult(
        positions=x,
        mean_intensity=mean,
        stderr=stderr,
        realizations=n_real,
        visibility=vis,
        seed=experiment.seed,
        coupling=experiment.coupling,
        wavelength=experiment.wavelength,
        baseline_intensity=baseline,
        realization_deltas=deltas if keep_realizations else None,
    )
