"""Geodesic-deviation dynamics of a nearby test-particle pair.

For the slow-motion pair (4-velocity ~ (c, 0, 0, 0)) the separation obeys

    d2 l^i / dt2 = -c^2 R_i0j0 l^j,

with the linearized transverse-traceless curvature

    R_i0j0 = -(1/(2 c^2)) d2 h_ij / dt2,

evaluated analytically mode by mode (each mode contributes
+k0^2/2 * h_ij, no finite differencing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .background import ModeEnsemble, evaluate_packed
from .errors import PrecisionError, UnstableRegimeError
from .tensors import C_LIGHT, SPATIAL_DIAG_SLOTS, SpacetimePoint

# packed slots of the spatial block (11, 12, 13, 22, 23, 33)
_SPATIAL_SLOTS = (4, 5, 6, 7, 8, 9)
_SPATIAL_IJ = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    """Electric curvature components R_i0j0 (3x3, 1/m^2) at one event."""

    matrix: np.ndarray
    point: SpacetimePoint

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("curvature matrix must be 3x3")
        object.__setattr__(self, "matrix", 0.5 * (m + m.T))


@dataclass
class DeviationState:
    """Separation and separation velocity of the pair at proper time tau."""

    ell: np.ndarray
    ell_dot: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        self.ell = np.asarray(self.ell, dtype=float).reshape(3).copy()
        self.ell_dot = np.asarray(self.ell_dot, dtype=float).reshape(3).copy()
        if not (np.isfinite(self.ell).all() and np.isfinite(self.ell_dot).all()):
            raise ValueError("deviation state components must be finite")


class PhaseAccumulation(NamedTuple):
    """Per-mode oscillation phases; ``stable`` flags modes with R >= 0."""

    phases: np.ndarray
    stable: np.ndarray


def _mode_weighted_packed(ens: ModeEnsemble, point: SpacetimePoint) -> np.ndarray:
    """Packed sum over modes of (k0^2 / 2) * h_mode(p)."""
    pol, kvec, phase = ens._stacked
    if pol.shape[0] == 0:
        return np.zeros(10)
    x4 = point.coords(ens.spec.light_speed)
    angles = kvec @ x4 + phase
    weights = 0.5 * kvec[:, 0] ** 2
    return 2.0 * ((weights * np.exp(1j * angles)) @ pol).real


def curvature_at(ens: ModeEnsemble, point: SpacetimePoint) -> CurvatureSample:
    """R_i0j0 from the analytic second time derivative of h."""
    packed = _mode_weighted_packed(ens, point)
    m = np.zeros((3, 3))
    for slot, (i, j) in zip(_SPATIAL_SLOTS, _SPATIAL_IJ):
        m[i, j] = packed[slot]
        m[j, i] = packed[slot]
    return CurvatureSample(m, point)


def oscillation_frequency(r1010: float, light_speed: float = C_LIGHT) -> float:
    """w = c sqrt(R) for R >= 0; raises UnstableRegimeError otherwise."""
    if r1010 < 0.0:
        raise UnstableRegimeError(light_speed * math.sqrt(-r1010))
    return light_speed * math.sqrt(r1010)


def closed_form_deviation(ell0: complex, omega: float, t: float) -> complex:
    """l0 * exp(i w t) at a fixed spatial point.

    The spatial factor of the separable solution is absorbed into ell0; do
    not extrapolate spatial growth from it.
    """
    return ell0 * np.exp(1j * omega * t)


def _as_matrix(sample) -> np.ndarray:
    if isinstance(sample, CurvatureSample):
        return sample.matrix
    return np.asarray(sample, dtype=float)


def integrate_deviation(
    initial: DeviationState,
    curvature: Callable[[float], "CurvatureSample | np.ndarray"],
    dt: float,
    steps: int,
    light_speed: float = C_LIGHT,
) -> list[DeviationState]:
    """Fixed-step classic Runge-Kutta integration of the deviation equation.

    ``curvature`` maps a time to R_i0j0.  Returns steps+1 states including
    the initial one.  A resolution guard requires dt * w_bound < 0.1 with
    w_bound = c * sqrt(||R||_F), a cheap upper bound on the largest local
    oscillation frequency.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    c2 = light_speed**2

    def rhs(t: float) -> np.ndarray:
        r = _as_matrix(curvature(t))
        omega_bound = light_speed * math.sqrt(np.sqrt((r * r).sum()))
        if dt * omega_bound >= 0.1:
            raise PrecisionError(
                f"dt {dt:.3e} under-resolves local frequency bound "
                f"{omega_bound:.3e} rad/s",
                suggestion=0.05 / omega_bound,
            )
        return -c2 * r

    states = [DeviationState(initial.ell, initial.ell_dot, initial.tau)]
    ell = states[0].ell.copy()
    vel = states[0].ell_dot.copy()
    t = initial.tau
    for _ in range(steps):
        a1 = rhs(t)
        a2 = rhs(t + 0.5 * dt)
        a4 = rhs(t + dt)

        k1_l, k1_v = vel, a1 @ ell
        k2_l = vel + 0.5 * dt * k1_v
        k2_v = a2 @ (ell + 0.5 * dt * k1_l)
        k3_l = vel + 0.5 * dt * k2_v
        k3_v = a2 @ (ell + 0.5 * dt * k2_l)
        k4_l = vel + dt * k3_v
        k4_v = a4 @ (ell + dt * k3_l)

        ell = ell + (dt / 6.0) * (k1_l + 2.0 * k2_l + 2.0 * k3_l + k4_l)
        vel = vel + (dt / 6.0) * (k1_v + 2.0 * k2_v + 2.0 * k3_v + k4_v)
        t += dt
        states.append(DeviationState(ell, vel, t))
    return states


def phase_accumulation(
    ens: ModeEnsemble, point: SpacetimePoint, t: float
) -> PhaseAccumulation:
    """Per-mode phases Phi(j) = w(j) * t with w(j) = c sqrt(R_1010(j)).

    R_1010(j) is the x-x electric curvature component contributed by mode j
    alone at ``point``.  Modes momentarily in the unstable (negative R)
    regime report zero phase and stable=False.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    pol, kvec, phase = ens._stacked
    c = ens.spec.light_speed
    if pol.shape[0] == 0:
        return PhaseAccumulation(np.zeros(0), np.zeros(0, dtype=bool))
    x4 = point.coords(c)
    angles = kvec @ x4 + phase
    # slot 4 is the packed 11 component
    r_xx = kvec[:, 0] ** 2 * (np.exp(1j * angles) * pol[:, 4]).real
    stable = r_xx >= 0.0
    omegas = c * np.sqrt(np.where(stable, r_xx, 0.0))
    return PhaseAccumulation(omegas * t, stable)
