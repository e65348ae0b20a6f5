"""Interval probabilities, action probabilities and the action-phase
wavefunction.

Probabilities use the bare Gaussian exponential exp(-dl^2 / 2 sigma^2), so
that P(0) = 1 and P(inf) = 0 hold exactly; the Gaussian prefactor
1/(sigma sqrt(2 pi)) instead defines the squared amplitude a^2 of the
wavefunction psi = a exp(i S / S0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NormalizationError


@dataclass(frozen=True)
class ProbabilityModel:
    """Dispersion sigma, particle mass, and the derived action quantum.

    S0 = mass * sigma^2 / (2 * timescale).  The timescale (seconds) makes
    the units of S0 come out as action; with the default 1.0 the relation
    is the bare mass * sigma^2 / 2.
    """

    sigma: float
    mass: float
    timescale: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError("sigma must be > 0")
        if not self.mass > 0.0:
            raise ValueError("mass must be > 0")
        if not self.timescale > 0.0:
            raise ValueError("timescale must be > 0")

    @property
    def s0(self) -> float:
        return self.mass * self.sigma**2 / (2.0 * self.timescale)


def interval_probability(delta_ell, sigma: float):
    """exp(-dl^2 / (2 sigma^2)); accepts scalars or arrays."""
    if not sigma > 0.0:
        raise ValueError("sigma must be > 0")
    delta_ell = np.asarray(delta_ell, dtype=float)
    out = np.exp(-(delta_ell**2) / (2.0 * sigma**2))
    return float(out) if out.ndim == 0 else out


def amplitude_prefactor(sigma: float) -> float:
    """a with a^2 = 1 / (sigma sqrt(2 pi))."""
    if not sigma > 0.0:
        raise ValueError("sigma must be > 0")
    return (sigma * math.sqrt(2.0 * math.pi)) ** -0.5


def action_probability(model: ProbabilityModel, value: float, kind: str = "action") -> float:
    """exp(-S/S0) for kind="action", exp(-W/(m sigma^2)) for kind="energy".

    The two variants are kept distinct as stated; they coincide up to the
    factor 2 S0 = m sigma^2 (timescale 1).
    """
    if value < 0.0:
        raise ValueError(f"{kind} argument must be nonnegative")
    if kind == "action":
        return math.exp(-value / model.s0)
    if kind == "energy":
        return math.exp(-value / (model.mass * model.sigma**2))
    raise ValueError("kind must be 'action' or 'energy'")


def wavefunction_from_action(a: float, action: float, s0: float) -> complex:
    """psi = a * exp(i S / S0)."""
    if not s0 > 0.0:
        raise ValueError("S0 must be > 0")
    return a * complex(math.cos(action / s0), math.sin(action / s0))


@dataclass(frozen=True)
class TripleCheck:
    """One interval triple with its probabilities and the literal
    sub-additivity inequality P21 + P32 <= P31."""

    dl21: float
    dl32: float
    dl31: float
    p21: float
    p32: float
    p31: float
    literal_holds: bool

    def to_dict(self) -> dict:
        return {
            "dl21": self.dl21,
            "dl32": self.dl32,
            "dl31": self.dl31,
            "p21": self.p21,
            "p32": self.p32,
            "p31": self.p31,
            "literal_holds": self.literal_holds,
        }


@dataclass(frozen=True)
class AxiomReport:
    """Axiom check over a batch of interval triples.

    ``monotone_nonincreasing`` covers the Gaussian assignment itself;
    ``literal_failures`` counts triples where the literal inequality
    P21 + P32 <= P31 fails.  The Gaussian assignment generally violates it,
    so this is recorded rather than asserted.
    """

    sigma: float
    triples: tuple[TripleCheck, ...]
    monotone_nonincreasing: bool

    @property
    def literal_failures(self) -> int:
        return sum(1 for t in self.triples if not t.literal_holds)

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "monotone_nonincreasing": self.monotone_nonincreasing,
            "literal_failures": self.literal_failures,
            "triple_count": len(self.triples),
            "triples": [t.to_dict() for t in self.triples],
        }


def check_probability_axioms(sigma: float, sample_triples) -> AxiomReport:
    """Evaluate the interval-probability axioms on (dl21, dl32, dl31) triples.

    Each triple must satisfy dl21 + dl32 >= dl31 >= 0 (triangle inequality of
    single-type interval chains); malformed triples raise ValueError.
    """
    if not sigma > 0.0:
        raise ValueError("sigma must be > 0")
    checks = []
    legs = [0.0]
    for idx, triple in enumerate(sample_triples):
        if len(triple) != 3:
            raise ValueError(f"triple #{idx}: expected 3 interval values")
        dl21, dl32, dl31 = (float(v) for v in triple)
        if min(dl21, dl32, dl31) < 0.0:
            raise ValueError(f"triple #{idx}: intervals must be nonnegative")
        if dl21 + dl32 < dl31:
            raise ValueError(f"triple #{idx}: violates dl21 + dl32 >= dl31")
        p21 = interval_probability(dl21, sigma)
        p32 = interval_probability(dl32, sigma)
        p31 = interval_probability(dl31, sigma)
        checks.append(
            TripleCheck(dl21, dl32, dl31, p21, p32, p31, bool(p21 + p32 <= p31))
        )
        legs.extend((dl21, dl32, dl31))
    ordered = np.sort(np.asarray(legs))
    probs = interval_probability(ordered, sigma)
    monotone = bool(np.all(np.diff(np.atleast_1d(probs)) <= 0.0))
    return AxiomReport(sigma, tuple(checks), monotone)


def normalize_components(components, g: np.ndarray, dx) -> list[np.ndarray]:
    """Scale wavefunction components so the metric quadratic form integrates
    to one.

    The integral is sum_mn g_mn int psi_m conj(psi_n) dx, evaluated as a
    Riemann sum with cell volume prod(dx).  For real fields this is the
    plain bilinear form; the conjugate pairing keeps it real for complex
    fields.  A non-positive integral (an indefinite-metric failure) raises
    NormalizationError.
    """
    fields = [np.asarray(c, dtype=complex) for c in components]
    if not fields:
        raise ValueError("need at least one component")
    shape = fields[0].shape
    if any(f.shape != shape for f in fields):
        raise ValueError("all components must share one grid shape")
    g = np.asarray(g, dtype=float)
    m = len(fields)
    if g.shape != (m, m):
        raise ValueError(f"metric must be {m}x{m} for {m} components")
    volume = float(np.prod(dx))
    if not volume > 0.0:
        raise ValueError("cell volume must be positive")

    integral = 0.0 + 0.0j
    for i in range(m):
        for j in range(m):
            if g[i, j] != 0.0:
                integral += g[i, j] * np.sum(fields[i] * np.conj(fields[j]))
    integral *= volume

    if abs(integral.imag) > 1e-12 * max(abs(integral.real), 1e-300):
        raise NormalizationError("metric quadratic form is not real", complex(integral))
    value = float(integral.real)
    if value <= 0.0:
        raise NormalizationError("metric quadratic form is not positive", value)
    scale = 1.0 / math.sqrt(value)
    return [f * scale for f in fields]
