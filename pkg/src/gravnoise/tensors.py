"""Flat-background tensor utilities.

Conventions used throughout the package:

* metric signature (+, -, -, -), index 0 is time;
* spacetime coordinates enter contractions as x^g = (c*t, x, y, z);
* symmetric 4x4 tensors are stored packed, as the 10 independent
  components in upper-triangle row order
  (00, 01, 02, 03, 11, 12, 13, 22, 23, 33).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

C_LIGHT = 299_792_458.0  # m/s

PACKED_PAIRS = (
    (0, 0), (0, 1), (0, 2), (0, 3),
    (1, 1), (1, 2), (1, 3),
    (2, 2), (2, 3),
    (3, 3),
)
# multiplicity of each packed slot when both tensor indices are summed
PACK_WEIGHTS = np.array([1.0, 2, 2, 2, 1, 2, 2, 1, 2, 1])
# packed slots of the spatial diagonal (11, 22, 33) and full diagonal
SPATIAL_DIAG_SLOTS = (4, 7, 9)
DIAG_SLOTS = (0, 4, 7, 9)
ETA_DIAG = np.array([1.0, -1.0, -1.0, -1.0])

_SLOT = {}
for _s, (_i, _j) in enumerate(PACKED_PAIRS):
    _SLOT[(_i, _j)] = _s
    _SLOT[(_j, _i)] = _s

_PAIR_I = np.array([p[0] for p in PACKED_PAIRS])
_PAIR_J = np.array([p[1] for p in PACKED_PAIRS])


def pack_matrix(m):
    """Pack (..., 4, 4) symmetric matrices into (..., 10) component vectors."""
    m = np.asarray(m)
    return np.stack([m[..., i, j] for i, j in PACKED_PAIRS], axis=-1)


def unpack_matrix(p):
    """Inverse of :func:`pack_matrix`."""
    p = np.asarray(p)
    out = np.zeros(p.shape[:-1] + (4, 4), dtype=p.dtype)
    for s, (i, j) in enumerate(PACKED_PAIRS):
        out[..., i, j] = p[..., s]
        if i != j:
            out[..., j, i] = p[..., s]
    return out


@dataclass(frozen=True)
class SpacetimePoint:
    """Event with time in seconds and spatial coordinates in meters."""

    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"SpacetimePoint.{name} must be finite")

    def coords(self, light_speed: float = C_LIGHT) -> np.ndarray:
        """Contravariant coordinates (c*t, x, y, z)."""
        return np.array([light_speed * self.t, self.x, self.y, self.z])

    def shifted(self, dt=0.0, dx=0.0, dy=0.0, dz=0.0) -> "SpacetimePoint":
        return SpacetimePoint(self.t + dt, self.x + dx, self.y + dy, self.z + dz)


@dataclass(frozen=True, eq=False)
class SymTensor4:
    """Real symmetric 4x4 tensor; packed storage makes symmetry structural."""

    packed: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.packed, dtype=float)
        if arr.shape != (10,):
            raise ValueError("SymTensor4 expects 10 packed components")
        object.__setattr__(self, "packed", arr)

    @classmethod
    def zero(cls) -> "SymTensor4":
        return cls(np.zeros(10))

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-12) -> "SymTensor4":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("expected a 4x4 matrix")
        scale = max(np.abs(m).max(), 1.0)
        if np.abs(m - m.T).max() > tol * scale:
            raise ValueError("matrix is not symmetric within tolerance")
        return cls(pack_matrix(0.5 * (m + m.T)))

    @property
    def matrix(self) -> np.ndarray:
        return unpack_matrix(self.packed)

    def __getitem__(self, ij):
        return float(self.packed[_SLOT[ij]])

    def __add__(self, other: "SymTensor4") -> "SymTensor4":
        return SymTensor4(self.packed + other.packed)

    def __sub__(self, other: "SymTensor4") -> "SymTensor4":
        return SymTensor4(self.packed - other.packed)

    def max_abs(self) -> float:
        return float(np.abs(self.packed).max())


def minkowski() -> SymTensor4:
    """Flat metric diag(+1, -1, -1, -1)."""
    packed = np.zeros(10)
    packed[list(DIAG_SLOTS)] = ETA_DIAG
    return SymTensor4(packed)


def interval_squared(g: SymTensor4, dx) -> float:
    """Quadratic form g_ik dx^i dx^k over all 16 index pairs."""
    dx = np.asarray(dx, dtype=float)
    if dx.shape != (4,):
        raise ValueError("displacement must have 4 components")
    return float(np.dot(PACK_WEIGHTS * g.packed, dx[_PAIR_I] * dx[_PAIR_J]))


def interval_squared_packed(g_packed: np.ndarray, dx: np.ndarray) -> np.ndarray:
    """Vectorized quadratic form for packed metrics (..., 10) and (..., 4)."""
    prod = dx[..., _PAIR_I] * dx[..., _PAIR_J]
    return np.einsum("...s,...s->...", PACK_WEIGHTS * g_packed, prod)
