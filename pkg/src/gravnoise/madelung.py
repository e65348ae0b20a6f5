"""Amplitude/action decomposition of a wavefunction and the residuals of
the classical transport equations.

With psi = a exp(i S / f), f = S0 or 2 S0 per the grid's phase convention,
the evolved field satisfies the continuity equation

    d(a^2)/dt + div(a^2 grad(S)/m) = 0

to discretization accuracy, while the Hamilton-Jacobi residual

    dS/dt + (grad S)^2 / 2m + U

converges not to zero but to -Q, where

    Q = -(hbar_eff^2 / 2m) lap(a) / a,      hbar_eff = 2 S0,

is the amplitude-curvature (quantum) potential.  ``derivation_gap_report``
measures both residuals along an evolution; the classical pair of equations
reproduces the dynamics exactly if and only if Q is included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DecompositionError
from .schrodinger import CrankNicolson, WaveFunctionGrid

DEFAULT_THRESHOLD_REL = 1e-12
# cells this close to a grid edge are excluded from residual reports,
# since np.gradient falls back to one-sided stencils there
EDGE_MARGIN = 2


@dataclass
class MadelungPair:
    """Amplitude and action grids with the metadata of their source grid.

    ``mask`` flags cells where the decomposition is valid (amplitude above
    the unwrap threshold and connected to the anchor).
    """

    amplitude: np.ndarray
    action: np.ndarray
    mask: np.ndarray
    dx: float
    t: float
    mass: float
    s0: float
    phase_convention: str
    boundary: str
    potential: np.ndarray

    @property
    def convention_factor(self) -> float:
        return self.s0 if self.phase_convention == "S/S0" else 2.0 * self.s0


def _unwrap_from(phase: np.ndarray, anchor: tuple[int, ...]) -> np.ndarray:
    """Unwrap the phase grid axis by axis starting at the anchor cell."""

    def unwrap_axis0(arr: np.ndarray, start: int) -> np.ndarray:
        out = np.empty_like(arr)
        out[start:] = np.unwrap(arr[start:], axis=0)
        head = np.unwrap(arr[start::-1], axis=0)[::-1]
        out[: start + 1] = head
        return out

    if phase.ndim == 1:
        return unwrap_axis0(phase, anchor[0])
    i0, j0 = anchor
    out = phase.copy()
    out[i0, :] = unwrap_axis0(phase[i0, :], j0)
    upper = np.unwrap(np.concatenate([out[i0:i0 + 1, :], phase[i0 + 1:, :]], axis=0), axis=0)
    lower = np.unwrap(np.concatenate([out[i0:i0 + 1, :], phase[:i0, :][::-1]], axis=0), axis=0)
    out[i0:, :] = upper
    out[:i0, :] = lower[1:][::-1]
    return out


def madelung_decompose(
    w: WaveFunctionGrid,
    anchor: tuple[int, ...] | None = None,
    zero_mean: bool = True,
    threshold_rel: float = DEFAULT_THRESHOLD_REL,
    min_coverage: float = 0.9,
) -> MadelungPair:
    """Split psi into amplitude a = |psi| and action S = f * unwrapped phase.

    The phase is unwrapped axis by axis from ``anchor`` (default: the cell
    of maximum |psi|).  Cells below ``threshold_rel * max|psi|`` are masked.
    If the above-threshold cells fragment so that the anchor's connected
    region holds less than ``min_coverage`` of them, the unwrap path is
        ill-defined and DecompositionError reports the region sizes.

    ``zero_mean=True`` applies the zero-mean gauge to S over valid cells;
    residual computations pass zero_mean=False and a common anchor so that
    time differences of S stay meaningful.
    """
    a = np.abs(w.psi)
    amax = float(a.max())
    mask = a > threshold_rel * amax
    if anchor is None:
        anchor = np.unravel_index(int(np.argmax(a)), a.shape)
    else:
        anchor = tuple(int(i) for i in anchor)
        if not mask[anchor]:
            raise DecompositionError("anchor cell is below the unwrap threshold")

    labels, n_regions = ndimage.label(mask)
    if n_regions > 1:
        sizes = ndimage.sum_labels(np.ones_like(labels), labels, range(1, n_regions + 1))
        anchor_label = labels[anchor]
        if sizes[anchor_label - 1] < min_coverage * mask.sum():
            raise DecompositionError(
                f"{n_regions} disconnected amplitude regions; anchor region covers "
                f"{sizes[anchor_label - 1] / mask.sum():.1%} of the supported cells",
                region_sizes=sorted(int(s) for s in sizes),
            )
        mask = labels == anchor_label

    phase = _unwrap_from(np.angle(w.psi), anchor)
    factor = w.s0 if w.phase_convention == "S/S0" else 2.0 * w.s0
    action = factor * phase
    if zero_mean:
        action = action - action[mask].mean()
    return MadelungPair(
        amplitude=a,
        action=action,
        mask=mask,
        dx=w.dx,
        t=w.t,
        mass=w.mass,
        s0=w.s0,
        phase_convention=w.phase_convention,
        boundary=w.boundary,
        potential=w.potential.copy(),
    )


def recompose(pair: MadelungPair) -> np.ndarray:
    """psi = a exp(i S / f); inverse of the decomposition up to global phase."""
    return pair.amplitude * np.exp(1j * pair.action / pair.convention_factor)


def _edge_nan(arr: np.ndarray, margin: int = EDGE_MARGIN) -> np.ndarray:
    out = arr.copy()
    for axis in range(out.ndim):
        sl_head = [slice(None)] * out.ndim
        sl_tail = [slice(None)] * out.ndim
        sl_head[axis] = slice(0, margin)
        sl_tail[axis] = slice(out.shape[axis] - margin, None)
        out[tuple(sl_head)] = np.nan
        out[tuple(sl_tail)] = np.nan
    return out


def quantum_potential(
    a: np.ndarray,
    mass: float,
    s0: float,
    dx: float,
    threshold_rel: float = DEFAULT_THRESHOLD_REL,
) -> np.ndarray:
    """Q = -( (2 S0)^2 / 2m ) lap(a) / a with a centered Laplacian.

    Cells below threshold and one boundary cell per edge come back as NaN.
    """
    a = np.asarray(a, dtype=float)
    lap = np.zeros_like(a)
    for axis in range(a.ndim):
        lap += (np.roll(a, -1, axis) - 2.0 * a + np.roll(a, 1, axis)) / dx**2
    hbar_eff = 2.0 * s0
    with np.errstate(divide="ignore", invalid="ignore"):
        q = -(hbar_eff**2) / (2.0 * mass) * lap / a
    q[a <= threshold_rel * a.max()] = np.nan
    return _edge_nan(q, margin=1)


def _check_pair(before: MadelungPair, after: MadelungPair) -> float:
    dt = after.t - before.t
    if not dt > 0.0:
        raise ValueError("pairs must be ordered in time with after.t > before.t")
    if before.amplitude.shape != after.amplitude.shape:
        raise ValueError("pairs must share one grid")
    if before.phase_convention != after.phase_convention:
        raise ValueError("pairs must share one phase convention")
    return dt


def _align_action(before: MadelungPair, after: MadelungPair) -> np.ndarray:
    """Remove whole 2 pi phase-sheet jumps between two raw decompositions."""
    factor = before.convention_factor
    common = before.mask & after.mask
    jump = np.median((after.action - before.action)[common]) / (2.0 * math.pi * factor)
    return after.action - round(float(jump)) * 2.0 * math.pi * factor


def hj_residual(before: MadelungPair, after: MadelungPair) -> np.ndarray:
    """Pointwise dS/dt + (grad S)^2 / 2m + U at the midpoint time.

    For a Schrodinger-evolved field this converges to -Q, not zero.  Both
    pairs should be decomposed with zero_mean=False and a common anchor.
    Masked and edge cells are NaN.
    """
    dt = _check_pair(before, after)
    action_after = _align_action(before, after)
    ds_dt = (action_after - before.action) / dt
    s_mid = 0.5 * (before.action + action_after)
    grads = np.gradient(s_mid, before.dx, edge_order=2)
    if s_mid.ndim == 1:
        grads = (grads,)
    kinetic = sum(g**2 for g in grads) / (2.0 * before.mass)
    res = ds_dt + kinetic + before.potential
    res[~(before.mask & after.mask)] = np.nan
    return _edge_nan(res)


def continuity_residual(before: MadelungPair, after: MadelungPair) -> np.ndarray:
    """Pointwise d(a^2)/dt + div(a^2 grad(S)/m) at the midpoint time.

    Converges to zero under grid refinement for Schrodinger-evolved fields.
    """
    dt = _check_pair(before, after)
    action_after = _align_action(before, after)
    rho_before = before.amplitude**2
    rho_after = after.amplitude**2
    drho_dt = (rho_after - rho_before) / dt
    rho_mid = 0.5 * (rho_before + rho_after)
    s_mid = 0.5 * (before.action + action_after)
    grads = np.gradient(s_mid, before.dx, edge_order=2)
    if s_mid.ndim == 1:
        grads = (grads,)
    divergence = np.zeros_like(rho_mid)
    for axis, g in enumerate(grads):
        flux = rho_mid * g / before.mass
        divergence += np.gradient(flux, before.dx, edge_order=2, axis=axis)
    res = drho_dt + divergence
    res[~(before.mask & after.mask)] = np.nan
    return _edge_nan(res)


@dataclass(frozen=True)
class GapSample:
    """Residual maxima over the evaluation window at one sampled step."""

    step: int
    time: float
    max_continuity: float
    max_hj_plus_q: float
    max_q: float
    evaluated_cells: int

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "time": self.time,
            "max_continuity": self.max_continuity,
            "max_hj_plus_q": self.max_hj_plus_q,
            "max_q": self.max_q,
            "evaluated_cells": self.evaluated_cells,
        }


@dataclass(frozen=True)
class DerivationGapReport:
    """Residual history of an evolution.

    ``worst_gap_ratio`` is max |HJ residual + Q| / max |Q| over the samples;
    small values mean the classical equations plus the amplitude-curvature
    term Q account for the full evolution.
    """

    samples: tuple[GapSample, ...]
    phase_convention: str
    cells: tuple[int, ...]
    dx: float
    dt: float
    amp_floor: float
    final: WaveFunctionGrid | None = None

    @property
    def worst_continuity(self) -> float:
        return max(s.max_continuity for s in self.samples)

    @property
    def worst_gap_ratio(self) -> float:
        return max(s.max_hj_plus_q / s.max_q for s in self.samples if s.max_q > 0.0)

    def to_dict(self) -> dict:
        return {
            "phase_convention": self.phase_convention,
            "cells": list(self.cells),
            "dx": self.dx,
            "dt": self.dt,
            "amp_floor": self.amp_floor,
            "worst_continuity": self.worst_continuity,
            "worst_gap_ratio": self.worst_gap_ratio,
            "samples": [s.to_dict() for s in self.samples],
        }


def _window_max(values: np.ndarray, window: np.ndarray) -> float:
    sel = values[window]
    sel = sel[np.isfinite(sel)]
    return float(np.abs(sel).max()) if sel.size else 0.0


def derivation_gap_report(
    initial: WaveFunctionGrid,
    steps: int,
    dt: float,
    sample_every: int = 10,
    amp_floor: float = 1e-3,
) -> DerivationGapReport:
    """Evolve ``initial`` and record continuity and HJ+Q residual maxima.

    Residuals are measured between consecutive steps at every
    ``sample_every``-th step, on cells whose midpoint amplitude exceeds
    ``amp_floor`` times its maximum (tail cells would dominate the maxima
    with amplified but physically empty values).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    stepper = CrankNicolson(initial, dt)
    w = initial
    samples = []
    for step_index in range(steps):
        psi_next = stepper.apply(w.psi)
        w_next = WaveFunctionGrid(
            psi_next, w.dx, t=w.t + dt, potential=w.potential, mass=w.mass,
            s0=w.s0, boundary=w.boundary, phase_convention=w.phase_convention,
        )
        if step_index % sample_every == 0:
            anchor = np.unravel_index(int(np.argmax(np.abs(w.psi))), w.psi.shape)
            before = madelung_decompose(w, anchor=anchor, zero_mean=False)
            after = madelung_decompose(w_next, anchor=anchor, zero_mean=False)
            a_mid = 0.5 * (before.amplitude + after.amplitude)
            window = (
                (a_mid >= amp_floor * a_mid.max()) & before.mask & after.mask
            )
            q = quantum_potential(a_mid, w.mass, w.s0, w.dx)
            hj = hj_residual(before, after)
            cont = continuity_residual(before, after)
            finite = np.isfinite(q) & np.isfinite(hj) & np.isfinite(cont) & window
            samples.append(
                GapSample(
                    step=step_index,
                    time=w.t + 0.5 * dt,
                    max_continuity=_window_max(cont, finite),
                    max_hj_plus_q=_window_max(hj + q, finite),
                    max_q=_window_max(q, finite),
                    evaluated_cells=int(finite.sum()),
                )
            )
        w = w_next
    return DerivationGapReport(
        samples=tuple(samples),
        phase_convention=initial.phase_convention,
        cells=initial.psi.shape,
        dx=initial.dx,
        dt=dt,
        amp_floor=amp_floor,
        final=w,
    )
