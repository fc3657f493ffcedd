#!/usr/bin/env python3
"""Cost-difference curves as the client count grows: 2, 3 and 10 clients.

Each write in sub mode fans a notification out to every other client, so
more clients tilt the balance against sub mode.  With 2 clients the delta
curve is a pure sinusoid and the policy can thrash forever; with 10 it is
nearly monotone and the policy switches at most once.  The published
3- and 10-client closed forms disagree with the curve implied by the cost
model here, so both columns are emitted side by side.

Writes demo_output/figure{1,2,3}.csv and, when matplotlib is importable,
demo_output/client_count_curves.png.
"""

import math
from pathlib import Path

import numpy as np

from switchlab import DeltaCurve, per_cycle_recovery
from switchlab.runner import figure_csv, figures

OUT = Path(__file__).resolve().parent.parent / "demo_output"
OUT.mkdir(exist_ok=True)

for which, n_clients in ((1, 2), (2, 3), (3, 10)):
    path = OUT / f"figure{which}.csv"
    path.write_text(figure_csv(which, 1257))
    rise, fall = per_cycle_recovery(n_clients, 1.0, 1.0)
    header, rows = figures(which, 1257)
    worst_gap = max(abs(r[1] - r[2]) for r in rows)
    print(
        f"figure {which} ({n_clients} clients): wrote {path.name}; "
        f"per-cycle recovery {rise:.4f} nonsub-active / {fall:.4f} sub-active; "
        f"published vs model gap up to {worst_gap:.4f}"
    )

print(
    "\nwith 10 clients the nonsub-active recovery tops out at "
    f"{per_cycle_recovery(10, 1.0, 1.0)[0]:.4f} per cycle, so any threshold "
    "above that never triggers when starting on nonsub"
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    t = np.linspace(0, 4 * math.pi, 1257)
    fig, axes = plt.subplots(3, 1, figsize=(9, 10), sharex=True)
    for ax, n in zip(axes, (2, 3, 10)):
        ax.plot(t, DeltaCurve(n, 1, 1, published=True).at(t), label="published")
        ax.plot(t, DeltaCurve(n, 1, 1).at(t), "--", label="cost model")
        if n == 2:
            ax.axhline(2.0, color="gray", lw=0.8)
            ax.axhline(-2.0, color="gray", lw=0.8)
        ax.set_ylabel(f"{n} clients")
        ax.legend(loc="lower left", fontsize=8)
    axes[-1].set_xlabel("t (dimensionless, omega = 1)")
    fig.suptitle("Accumulated cost difference, nonsub minus sub")
    fig.tight_layout()
    fig.savefig(OUT / "client_count_curves.png", dpi=120)
    print(f"wrote {OUT / 'client_count_curves.png'}")
