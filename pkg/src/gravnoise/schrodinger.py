"""Crank-Nicolson evolution of the modified Schrodinger equation

    i (2 S0) dpsi/dt = -( (2 S0)^2 / 2m ) lap psi + U psi,

the standard equation with hbar replaced by the effective constant
hbar_eff = 2 S0.  Time stepping is trapezoidal (implicit, norm conserving),
space is a centered second-order stencil with periodic or hard-wall
boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import NumericalError, PrecisionError

PHASE_CONVENTIONS = ("S/(2S0)", "S/S0")


@dataclass
class WaveFunctionGrid:
    """Complex psi on a uniform 1D or 2D grid.

    ``phase_convention`` fixes how an action field is read off the phase:
    "S/(2S0)" is the standard identification S = hbar_eff * phase, while
    "S/S0" matches the literal psi = a exp(i S / S0) construction.
    """

    psi: np.ndarray
    dx: float
    t: float = 0.0
    potential: np.ndarray | None = None
    mass: float = 1.0
    s0: float = 0.5
    boundary: str = "periodic"
    phase_convention: str = "S/(2S0)"

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.ndim not in (1, 2):
            raise ValueError("psi must be a 1D or 2D grid")
        if min(self.psi.shape) < 8:
            raise ValueError("grid needs at least 8 cells per axis")
        if not self.dx > 0.0:
            raise ValueError("dx must be > 0")
        if not self.mass > 0.0:
            raise ValueError("mass must be > 0")
        if not self.s0 > 0.0:
            raise ValueError("S0 must be > 0")
        if self.boundary not in ("periodic", "dirichlet"):
            raise ValueError("boundary must be 'periodic' or 'dirichlet'")
        if self.phase_convention not in PHASE_CONVENTIONS:
            raise ValueError(f"phase_convention must be one of {PHASE_CONVENTIONS}")
        if self.potential is None:
            self.potential = np.zeros(self.psi.shape)
        else:
            self.potential = np.asarray(self.potential, dtype=float)
            if self.potential.shape != self.psi.shape:
                raise ValueError("potential must match the psi grid shape")
        n = self.norm()
        if not (np.isfinite(n) and n > 0.0):
            raise ValueError("psi norm must be finite and positive")

    @property
    def hbar_eff(self) -> float:
        return 2.0 * self.s0

    @property
    def cell_volume(self) -> float:
        return self.dx**self.psi.ndim

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.cell_volume)

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Cell coordinates per axis, centered on zero."""
        return tuple(
            (np.arange(n) - n // 2) * self.dx for n in self.psi.shape
        )


def grid_coordinates(cells: int, dx: float) -> np.ndarray:
    return (np.arange(cells) - cells // 2) * dx


def _laplacian_1d(n: int, dx: float, boundary: str) -> sp.spmatrix:
    main = np.full(n, -2.0)
    off = np.ones(n - 1)
    lap = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    if boundary == "periodic":
        lap[0, n - 1] = 1.0
        lap[n - 1, 0] = 1.0
    return (lap / dx**2).tocsr()


def _hamiltonian(w: WaveFunctionGrid) -> sp.spmatrix:
    coeff = -(w.hbar_eff**2) / (2.0 * w.mass)
    if w.psi.ndim == 1:
        lap = _laplacian_1d(w.psi.shape[0], w.dx, w.boundary)
    else:
        ny, nx = w.psi.shape
        ly = _laplacian_1d(ny, w.dx, w.boundary)
        lx = _laplacian_1d(nx, w.dx, w.boundary)
        lap = sp.kron(ly, sp.identity(nx)) + sp.kron(sp.identity(ny), lx)
    return (coeff * lap + sp.diags(w.potential.ravel())).tocsc()


class CrankNicolson:
    """Factorized trapezoidal stepper for a fixed (grid, dt) pair."""

    def __init__(self, w: WaveFunctionGrid, dt: float):
        if dt == 0.0:
            raise ValueError("dt must be nonzero")
        umax = float(np.abs(w.potential).max())
        if umax > 0.0 and abs(dt) * umax / w.hbar_eff >= 0.1:
            raise PrecisionError(
                f"dt * max|U| / (2 S0) = {abs(dt) * umax / w.hbar_eff:.3g} "
                "violates the accuracy guard",
                suggestion=0.05 * w.hbar_eff / umax,
            )
        self.dt = dt
        h = _hamiltonian(w)
        n = h.shape[0]
        z = 1j * dt / (2.0 * w.hbar_eff)
        eye = sp.identity(n, format="csc")
        try:
            self._lu = splu((eye + z * h).tocsc())
        except RuntimeError as exc:
            raise NumericalError(f"implicit step factorization failed: {exc}") from exc
        self._b = (eye - z * h).tocsr()
        self._shape = w.psi.shape

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = self._lu.solve(self._b @ psi.ravel())
        return out.reshape(self._shape)


def schrodinger_step(w: WaveFunctionGrid, dt: float) -> WaveFunctionGrid:
    """One norm-conserving implicit step; returns a new grid at t + dt."""
    stepper = CrankNicolson(w, dt)
    return replace(w, psi=stepper.apply(w.psi), t=w.t + dt)


def evolve(w: WaveFunctionGrid, dt: float, steps: int) -> WaveFunctionGrid:
    """Advance ``steps`` equal steps, factorizing the operators once."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if steps == 0:
        return replace(w, psi=w.psi.copy())
    stepper = CrankNicolson(w, dt)
    psi = w.psi
    for _ in range(steps):
        psi = stepper.apply(psi)
    return replace(w, psi=psi, t=w.t + steps * dt)


def gaussian_packet(
    cells: int,
    dx: float,
    sigma0: float,
    k0: float = 0.0,
    x0: float = 0.0,
    potential: np.ndarray | None = None,
    mass: float = 1.0,
    s0: float = 0.5,
    boundary: str = "periodic",
    phase_convention: str = "S/(2S0)",
) -> WaveFunctionGrid:
    """Unit-norm 1D Gaussian packet with density standard deviation sigma0."""
    x = grid_coordinates(cells, dx)
    psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma0**2) + 1j * k0 * x)
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    return WaveFunctionGrid(
        psi, dx, potential=potential, mass=mass, s0=s0,
        boundary=boundary, phase_convention=phase_convention,
    )


def plane_wave(
    cells: int,
    dx: float,
    mode_index: int = 1,
    mass: float = 1.0,
    s0: float = 0.5,
    phase_convention: str = "S/(2S0)",
) -> WaveFunctionGrid:
    """Unit-norm periodic eigenmode exp(i k x) with k = 2 pi mode_index / L."""
    x = grid_coordinates(cells, dx)
    k = 2.0 * np.pi * mode_index / (cells * dx)
    psi = np.exp(1j * k * x) / np.sqrt(cells * dx)
    return WaveFunctionGrid(
        psi, dx, mass=mass, s0=s0, boundary="periodic",
        phase_convention=phase_convention,
    )


def harmonic_potential(x: np.ndarray, mass: float, omega: float, x0: float = 0.0) -> np.ndarray:
    return 0.5 * mass * omega**2 * (np.asarray(x) - x0) ** 2


def packet_width(w: WaveFunctionGrid) -> float:
    """Density standard deviation sqrt(<x^2> - <x>^2) for 1D grids."""
    if w.psi.ndim != 1:
        raise ValueError("packet_width expects a 1D grid")
    (x,) = w.coordinates()
    rho = np.abs(w.psi) ** 2
    total = rho.sum()
    mean = (x * rho).sum() / total
    return float(np.sqrt(((x - mean) ** 2 * rho).sum() / total))


def free_spreading_width(sigma0: float, t: float, mass: float, s0: float) -> float:
    """Closed-form width sigma0 sqrt(1 + (hbar_eff t / (2 m sigma0^2))^2)."""
    hbar_eff = 2.0 * s0
    tau = hbar_eff * t / (2.0 * mass * sigma0**2)
    return sigma0 * np.sqrt(1.0 + tau**2)
