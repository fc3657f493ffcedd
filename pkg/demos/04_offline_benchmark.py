#!/usr/bin/env python3
"""How far from optimal does the online policy land?

For a range of switching costs, run the policy on the discretized 2-client
workload and compare it with the offline-optimal schedule computed by
dynamic programming over the identical cost sequence.  The ratio peaks in
the thrash regime, where the threshold sits near the delta curve's range
and the policy keeps buying the wrong implementation.

Writes demo_output/competitive_ratio.csv.
"""

import math
from pathlib import Path

from switchlab import competitive_report, opt_dp, simulate
from switchlab.scenario import ExplicitSC, Role, Scenario
from switchlab.workload import Sinusoidal

PI = math.pi
OUT = Path(__file__).resolve().parent.parent / "demo_output"
OUT.mkdir(exist_ok=True)

rows = []
print(f"{'sc':>5} {'events':>7} {'policy':>10} {'optimum':>10} {'ratio':>7}")
for sc in (0.5, 1.0, 2.0, 3.0, 3.9, 4.5):
    scenario = Scenario(
        n_clients=2, W=1.0, omega=1.0, workload=Sinusoidal(1.0, 1.0),
        sc_spec=ExplicitSC(sc_12=sc, sc_21=0.0), start_impl=Role.NONSUB,
        horizon=4 * PI, dt=2e-3,
    )
    trace = simulate(scenario)
    opt = opt_dp(trace.cost_pairs, sc, 0.0, scenario.start_slot())
    ratio = competitive_report(trace.grand_total, opt)
    print(f"{sc:>5} {len(trace.events):>7} {trace.grand_total:>10.3f} "
          f"{opt.opt_cost:>10.3f} {ratio:>7.3f}")
    rows.append((sc, len(trace.events), trace.grand_total, opt.opt_cost, ratio))

path = OUT / "competitive_ratio.csv"
path.write_text(
    "sc,n_events,policy_cost,opt_cost,ratio\n"
    + "\n".join(f"{r[0]},{r[1]},{r[2]!r},{r[3]!r},{r[4]!r}" for r in rows)
    + "\n"
)
print(f"\nwrote {path}")
print("note how the ratio is worst near sc = 4, the curve's full range: the "
      "policy pays for switches that an informed scheduler would never make")
