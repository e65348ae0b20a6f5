#!/usr/bin/env python3
"""Interval probabilities, the action wavefunction, and metric normalization.

Walks through the Gaussian interval-probability assignment and its axioms
(including the sub-additivity inequality that the Gaussian form cannot
satisfy literally, which the report records rather than hides), then
builds the action-phase wavefunction and normalizes component fields under
an indefinite component metric.
"""

import math

import numpy as np

import gravnoise as gn


def main():
    sigma = 1.0
    print("interval probabilities, sigma = 1:")
    for dl in (0.0, 0.5, 1.0, 2.0, 6.0):
        print(f"  P(dl = {dl:3.1f}) = {gn.interval_probability(dl, sigma):.6f}")
    print("  P(0) = 1 and P(inf) = 0 hold exactly for the bare exponential;")
    print("  the Gaussian prefactor instead defines the amplitude a:")
    a = gn.amplitude_prefactor(sigma)
    print(f"  a = {a:.6f}, a^2 * sigma * sqrt(2 pi) = "
          f"{a**2 * sigma * math.sqrt(2 * math.pi):.6f}")

    report = gn.check_probability_axioms(
        sigma, [(0.0, 0.0, 0.0), (1.0, 1.0, 2.0), (3.0, 3.0, 6.0), (0.5, 2.0, 2.2)]
    )
    print(f"\naxiom-3 report over {len(report.triples)} triples: "
          f"monotone = {report.monotone_nonincreasing}, "
          f"literal P21 + P32 <= P31 fails for {report.literal_failures} triples")
    worst = report.triples[2]
    print(f"  example (3, 3, 6) sigma: P21 + P32 = {worst.p21 + worst.p32:.4f} "
          f"but P31 = {worst.p31:.3e}")

    model = gn.ProbabilityModel(sigma=1.0, mass=2.0)
    print(f"\naction quantum S0 = m sigma^2 / 2 = {model.s0}")
    print(f"P(S = S0)   = {gn.action_probability(model, model.s0):.6f}")
    print(f"P(W = S0)   = {gn.action_probability(model, model.s0, kind='energy'):.6f}"
          "  (energy variant divides by m sigma^2 = 2 S0)")

    psi = gn.wavefunction_from_action(a, math.pi * model.s0, model.s0)
    print(f"psi at S = pi S0: {psi:.6f} (half-turn phase)")

    rng = np.random.default_rng(5)
    timelike = rng.normal(size=256) + 1j * rng.normal(size=256)
    spacelike = 0.3 * (rng.normal(size=256) + 1j * rng.normal(size=256))
    g = np.diag([1.0, -1.0])
    fields = gn.normalize_components([timelike, spacelike], g, 0.1)
    total = (np.abs(fields[0]) ** 2 - np.abs(fields[1]) ** 2).sum() * 0.1
    print(f"\nnormalized two-component field: metric integral = {total:.12f}")
    try:
        gn.normalize_components([0.0 * timelike, spacelike], g, 0.1)
    except gn.NormalizationError as exc:
        print(f"pure space-like component fails as it must: {exc}")


if __name__ == "__main__":
    main()
