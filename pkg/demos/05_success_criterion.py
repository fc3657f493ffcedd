#!/usr/bin/env python3
"""When is the policy guaranteed to behave?  The derivative criterion.

If the delta curve has slope d1 and curvature bounded by |d2| at the point
of interest, it stays above (or below) the parabola d2/2 t^2 + d1 t, and
that parabola clears a monotone excursion of 2 SC exactly when

    |d1| > 2 sqrt(SC |d2|)

Under that condition the policy switches at most once, onto the cheaper
implementation.  This script checks the verdict against brute-force policy
runs on synthetic streams whose delta is exactly the parabola, and shows
the derivative estimator recovering d1, d2 from noisy samples.
"""

import numpy as np

from switchlab import (
    CostPair,
    ImplSlot,
    SwitchCosts,
    estimate_derivatives,
    parabola,
    run_sequence,
    success_criterion,
)

F, S = ImplSlot.FIRST, ImplSlot.SECOND
SC = 1.0


def stream(d1, d2, horizon, dt=1e-3):
    ts = np.arange(0.0, horizon + dt / 2, dt)
    values = [parabola(d1, d2, float(t)) for t in ts]
    return [
        CostPair(max(b - a, 0.0), max(a - b, 0.0)) for a, b in zip(values, values[1:])
    ]


print(f"round-trip switching cost {SC}\n")
for d1, d2 in ((4.0, -1.0), (2.5, -1.0), (2.0, -1.0), (1.0, -1.0)):
    verdict = success_criterion(d1, d2, SC)
    vertex = parabola(d1, d2, -d1 / d2)
    print(f"d1={d1} d2={d2}: |d1|={verdict.lhs} vs 2*sqrt(SC|d2|)={verdict.rhs} "
          f"-> {'holds' if verdict.holds else 'does not hold'} "
          f"(parabola peaks at {vertex}, needs > {2 * SC})")
    pairs = stream(d1, d2, horizon=-d1 / d2)
    for start in (F, S):
        events, total, _ = run_sequence(pairs, start, SwitchCosts(SC, 0.0))
        final = start if len(events) % 2 == 0 else start.opposite
        print(f"    start {start.value}: {len(events)} switch(es), ends on {final.value}")
print()

# estimator: recover the derivatives from noisy samples of the parabola
rng = np.random.default_rng(1)
t = np.linspace(-1.0, 1.0, 201)
noisy = [(float(x), parabola(3.0, -0.8, float(x)) + rng.normal(0, 0.01)) for x in t]
est = estimate_derivatives(noisy, 0.0, 2.0)
print(f"estimator on noisy parabola (true d1=3, d2=-0.8, noise sigma 0.01): "
      f"d1={est.d1:.4f} d2={est.d2:.4f} from {est.n_samples} samples")
verdict = success_criterion(est.d1, est.d2, SC)
print(f"criterion from the estimates: lhs={verdict.lhs:.4f} rhs={verdict.rhs:.4f} "
      f"-> {'holds' if verdict.holds else 'does not hold'}")
