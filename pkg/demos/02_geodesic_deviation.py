#!/usr/bin/env python3
"""Two-particle separation under curvature: oracle match and noise response.

First integrates the constant-curvature oscillator and compares against the
closed form l0 cos(w t), with a convergence table for the fixed-step
fourth-order integrator.  Then drives the pair with a stochastic
background, showing the per-mode phase accumulation.
"""

import numpy as np

import gravnoise as gn


def main():
    # constant curvature: l'' = -c^2 R l with R = k > 0
    k = 4.0
    omega = np.sqrt(k)
    period = 2 * np.pi / omega
    const = np.diag([k, 0.0, 0.0])
    initial = gn.DeviationState([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])

    print("constant-curvature oscillator vs closed form:")
    prev = None
    for div in (125, 250, 500, 1000):
        traj = gn.integrate_deviation(initial, lambda t: const, period / div,
                                      10 * div, light_speed=1.0)
        ts = np.array([s.tau for s in traj])
        xs = np.array([s.ell[0] for s in traj])
        err = np.abs(xs - np.cos(omega * ts)).max()
        note = f"  ratio {prev / err:6.1f}" if prev else ""
        print(f"  dt = T/{div:<5d} max error over 10 periods = {err:.3e}{note}")
        prev = err
    print("(ratio near 16 per halving: fourth-order convergence)")

    print(f"\noscillation frequency for R = {k}: "
          f"w = {gn.oscillation_frequency(k, light_speed=1.0)}")
    try:
        gn.oscillation_frequency(-1.0, light_speed=1.0)
    except gn.UnstableRegimeError as exc:
        print(f"R = -1 signals the unstable regime, growth rate {exc.magnitude}")

    # stochastic background drive
    spec = gn.BackgroundSpec(mode_count=64, strain_rms=5e-3, f_min=0.5, f_max=2.0,
                             light_speed=1.0)
    ens = gn.generate_background(spec, seed=3)

    def curvature(t):
        return gn.curvature_at(ens, gn.SpacetimePoint(t, 0.0, 0.0, 0.0))

    traj = gn.integrate_deviation(initial, curvature, 0.02, 500, light_speed=1.0)
    drift = np.abs(np.stack([s.ell for s in traj]) - initial.ell).max()
    print(f"\nstochastic drive over {traj[-1].tau:.1f} s: "
          f"max separation change = {drift:.3e} (strain {spec.strain_rms})")

    acc = gn.phase_accumulation(ens, gn.SpacetimePoint(0.0, 0.0, 0.0, 0.0), t=10.0)
    stable = int(acc.stable.sum())
    print(f"per-mode phases at t = 10: {stable}/{len(acc.phases)} modes locally "
          f"oscillatory, largest phase {acc.phases.max():.3f} rad")
    print("(modes with momentarily negative curvature report zero phase and a flag)")


if __name__ == "__main__":
    main()
