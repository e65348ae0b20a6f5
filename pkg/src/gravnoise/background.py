"""Stochastic background of harmonic-gauge vacuum plane waves.

The metric perturbation is a superposition of transverse-traceless plane
waves,

    h_mn(x) = sum_j 2 Re[ e_mn(j) exp(i (k_g(j) x^g + phase_j)) ],

with covariant wave vectors k = (w/c, -w/c * n) for propagation direction
n, so every mode is null and satisfies the harmonic gauge by construction.

``strain_rms`` fixes the ensemble normalization: it is the RMS Frobenius
norm of the perturbation, sqrt(E[h_mn h_mn]) with a plain sum over all 16
components.  Individual components then carry a geometric fraction of it;
for an isotropic equal-mix ensemble E[h_11^2] = (2/15) * strain_rms^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError, LinearizationWarning, PrecisionError
from .tensors import (
    C_LIGHT,
    ETA_DIAG,
    SpacetimePoint,
    SymTensor4,
    minkowski,
    pack_matrix,
    unpack_matrix,
)


@dataclass(frozen=True)
class BackgroundSpec:
    """Statistical description of the random wave background.

    ``polarization_plus`` and ``polarization_cross`` are relative weights of
    the two transverse-traceless basis polarizations; they are normalized to
    unit sum at generation time.  ``isotropic=False`` sends every mode along
    +z instead of drawing directions uniformly on the sphere.
    """

    mode_count: int
    strain_rms: float
    f_min: float
    f_max: float
    polarization_plus: float = 0.5
    polarization_cross: float = 0.5
    isotropic: bool = True
    light_speed: float = C_LIGHT
    max_strain: float = 0.1

    def validation_errors(self) -> list[str]:
        errs = []
        if self.mode_count < 1:
            errs.append("background.mode_count: must be >= 1")
        if not self.strain_rms >= 0.0:
            errs.append("background.strain_rms: must be >= 0")
        if not 0.0 < self.f_min:
            errs.append("background.f_min: must be > 0")
        if not self.f_min < self.f_max:
            errs.append("background.f_max: must exceed f_min")
        if self.polarization_plus < 0.0 or self.polarization_cross < 0.0:
            errs.append("background.polarization_mix: weights must be >= 0")
        elif self.polarization_plus + self.polarization_cross <= 0.0:
            errs.append("background.polarization_mix: weights must not both be zero")
        if not self.light_speed > 0.0:
            errs.append("background.light_speed: must be > 0")
        if not self.max_strain > 0.0:
            errs.append("background.max_strain: must be > 0")
        return errs

    def validate(self) -> None:
        errs = self.validation_errors()
        if errs:
            raise ConfigError(errs)


@dataclass(frozen=True, eq=False)
class PlaneWaveMode:
    """One polarized harmonic metric perturbation.

    ``polarization`` is the packed complex tensor e_mn (amplitude folded in),
    ``wavevector`` the covariant k_g in rad/m with k_0 = w/c, and ``phase`` a
    scalar offset in radians.  Construction does not enforce the null and
    gauge invariants, so deliberately invalid modes can be built for residual
    diagnostics; generated modes are checked via :func:`mode_violations`.
    """

    polarization: np.ndarray
    wavevector: np.ndarray
    phase: float = 0.0

    def __post_init__(self):
        pol = np.asarray(self.polarization, dtype=complex)
        k = np.asarray(self.wavevector, dtype=float)
        if pol.shape == (4, 4):
            pol = pack_matrix(0.5 * (pol + pol.T))
        if pol.shape != (10,):
            raise ValueError("polarization must be a packed 10-vector or 4x4 matrix")
        if k.shape != (4,):
            raise ValueError("wavevector must have 4 components")
        object.__setattr__(self, "polarization", pol)
        object.__setattr__(self, "wavevector", k)

    @property
    def polarization_matrix(self) -> np.ndarray:
        return unpack_matrix(self.polarization)

    def angular_frequency(self, light_speed: float = C_LIGHT) -> float:
        return float(self.wavevector[0] * light_speed)

    def null_residual(self) -> float:
        """eta^mn k_m k_n; zero for a wave on the light cone."""
        k = self.wavevector
        return float(k[0] ** 2 - k[1] ** 2 - k[2] ** 2 - k[3] ** 2)

    def max_polarization(self) -> float:
        return float(np.abs(self.polarization).max())


def _transverse_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # reference axis least aligned with n keeps the cross product well conditioned
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, n)
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v


def make_tt_mode(
    direction,
    frequency: float,
    amp_plus: complex,
    amp_cross: complex = 0.0,
    phase: float = 0.0,
    light_speed: float = C_LIGHT,
) -> PlaneWaveMode:
    """Transverse-traceless mode along ``direction`` at ``frequency`` (Hz).

    ``amp_plus`` and ``amp_cross`` multiply the basis tensors u@u - v@v and
    u@v + v@u built from the propagation direction.
    """
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    omega = 2.0 * math.pi * frequency
    k0 = omega / light_speed
    wavevector = np.array([k0, -k0 * n[0], -k0 * n[1], -k0 * n[2]])
    u, v = _transverse_basis(n)
    e_plus = np.outer(u, u) - np.outer(v, v)
    e_cross = np.outer(u, v) + np.outer(v, u)
    spatial = amp_plus * e_plus + amp_cross * e_cross
    e4 = np.zeros((4, 4), dtype=complex)
    e4[1:, 1:] = spatial
    return PlaneWaveMode(pack_matrix(e4), wavevector, phase)


@dataclass(eq=False)
class ModeEnsemble:
    """Seeded realization of the background; (spec, seed) fixes it exactly."""

    modes: list[PlaneWaveMode]
    seed: int
    spec: BackgroundSpec

    @cached_property
    def _stacked(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.modes:
            return (
                np.zeros((0, 10), dtype=complex),
                np.zeros((0, 4)),
                np.zeros(0),
            )
        pol = np.stack([m.polarization for m in self.modes])
        kvec = np.stack([m.wavevector for m in self.modes])
        phase = np.array([m.phase for m in self.modes])
        return pol, kvec, phase

    def shortest_wavelength(self) -> float:
        _, kvec, _ = self._stacked
        if kvec.shape[0] == 0:
            return math.inf
        kmax = np.linalg.norm(kvec[:, 1:], axis=1).max()
        return math.inf if kmax == 0.0 else 2.0 * math.pi / kmax


def generate_background(spec: BackgroundSpec, seed: int) -> ModeEnsemble:
    """Draw a mode ensemble: isotropic directions, log-uniform frequencies,
    Gaussian polarization amplitudes with uniform phases, TT projection.

    The per-mode amplitude scale is strain_rms / (2 sqrt(N)) per polarization
    weight, which makes the ensemble RMS Frobenius norm of h equal to
    strain_rms (see the module docstring).
    """
    spec.validate()
    rng = np.random.default_rng(int(seed) & ((1 << 64) - 1))
    n_modes = spec.mode_count

    cos_theta = rng.uniform(-1.0, 1.0, n_modes)
    azimuth = rng.uniform(0.0, 2.0 * math.pi, n_modes)
    frequencies = np.exp(rng.uniform(math.log(spec.f_min), math.log(spec.f_max), n_modes))

    wsum = spec.polarization_plus + spec.polarization_cross
    w_plus = spec.polarization_plus / wsum
    w_cross = spec.polarization_cross / wsum
    scale = spec.strain_rms / (2.0 * math.sqrt(n_modes))
    amp_plus = rng.normal(0.0, 1.0, n_modes) * (scale * math.sqrt(w_plus))
    phi_plus = rng.uniform(0.0, 2.0 * math.pi, n_modes)
    amp_cross = rng.normal(0.0, 1.0, n_modes) * (scale * math.sqrt(w_cross))
    phi_cross = rng.uniform(0.0, 2.0 * math.pi, n_modes)

    if spec.isotropic:
        sin_theta = np.sqrt(1.0 - cos_theta**2)
        directions = np.column_stack(
            [sin_theta * np.cos(azimuth), sin_theta * np.sin(azimuth), cos_theta]
        )
    else:
        directions = np.tile([0.0, 0.0, 1.0], (n_modes, 1))

    modes = []
    for j in range(n_modes):
        mode = make_tt_mode(
            directions[j],
            float(frequencies[j]),
            amp_plus[j] * np.exp(1j * phi_plus[j]),
            amp_cross[j] * np.exp(1j * phi_cross[j]),
            phase=0.0,
            light_speed=spec.light_speed,
        )
        modes.append(mode)
    return ModeEnsemble(modes, int(seed), spec)


def mode_violations(
    mode: PlaneWaveMode, max_strain: float = 0.1, tol: float = 1e-12
) -> list[str]:
    """Invariant violations of one mode: null condition, harmonic gauge,
    linearization bound.  Empty list means the mode is valid."""
    out = []
    k2 = float(np.dot(mode.wavevector, mode.wavevector))
    if abs(mode.null_residual()) > tol * max(k2, 1e-300):
        out.append("wavevector is not null")
    e_scale = mode.max_polarization()
    if e_scale > 0:
        res = np.abs(harmonic_gauge_residual(mode)).max()
        kmag = math.sqrt(k2)
        if res > tol * e_scale * max(kmag, 1e-300):
            out.append("harmonic gauge condition violated")
    if e_scale > max_strain:
        out.append(f"polarization amplitude {e_scale:.3e} exceeds bound {max_strain:.3e}")
    return out


def evaluate_packed(ens: ModeEnsemble, x4: np.ndarray) -> np.ndarray:
    """Perturbation at coordinate rows x4 (M, 4), packed (M, 10).

    Fast path shared by the field, curvature and path-sampling code.
    """
    pol, kvec, phase = ens._stacked
    x4 = np.atleast_2d(np.asarray(x4, dtype=float))
    if pol.shape[0] == 0:
        return np.zeros((x4.shape[0], 10))
    angles = x4 @ kvec.T + phase
    return 2.0 * (np.exp(1j * angles) @ pol).real


def evaluate_perturbation(ens: ModeEnsemble, point: SpacetimePoint) -> SymTensor4:
    """h(p) = sum over modes of 2 Re[e exp(i(k x + phase))]; real symmetric."""
    x4 = point.coords(ens.spec.light_speed)
    return SymTensor4(evaluate_packed(ens, x4[None, :])[0])


def metric_at(ens: ModeEnsemble, point: SpacetimePoint) -> SymTensor4:
    """g = eta + h(p); warns when |h| exceeds the linearization bound."""
    h = evaluate_perturbation(ens, point)
    if h.max_abs() > ens.spec.max_strain:
        warnings.warn(
            f"max|h| = {h.max_abs():.3e} exceeds linearization bound "
            f"{ens.spec.max_strain:.3e}",
            LinearizationWarning,
            stacklevel=2,
        )
    return minkowski() + h


def harmonic_gauge_residual(mode: PlaneWaveMode) -> np.ndarray:
    """k_m e^m_n - (1/2) k_n e^m_m per index n; zero in harmonic gauge."""
    e = mode.polarization_matrix
    k = mode.wavevector
    e_up = ETA_DIAG[:, None] * e  # raise the first index with eta
    trace = np.trace(e_up)
    return k @ e_up - 0.5 * k * trace


def vacuum_wave_residual(
    ens: ModeEnsemble, point: SpacetimePoint, step: float
) -> SymTensor4:
    """Central finite-difference d'Alembertian of h at ``point``.

    Converges to zero at second order in ``step`` for valid (null) modes.
    ``step`` is a length in meters applied to every coordinate x^m.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    lam = ens.shortest_wavelength()
    if step >= lam / 4.0:
        raise PrecisionError(
            f"step {step:.3e} m does not resolve the shortest mode wavelength "
            f"{lam:.3e} m",
            suggestion=lam / 20.0,
        )
    x0 = point.coords(ens.spec.light_speed)
    pts = [x0]
    for mu in range(4):
        for sign in (+1.0, -1.0):
            shifted = x0.copy()
            shifted[mu] += sign * step
            pts.append(shifted)
    h = evaluate_packed(ens, np.array(pts))
    out = np.zeros(10)
    for mu in range(4):
        second = (h[1 + 2 * mu] - 2.0 * h[0] + h[2 + 2 * mu]) / step**2
        out += ETA_DIAG[mu] * second
    return SymTensor4(out)
