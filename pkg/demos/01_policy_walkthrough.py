#!/usr/bin/env python3
"""Step the switching policy by hand on a tiny request stream.

Two implementations serve the same five requests at different costs.  The
policy accumulates both cost streams, watches their difference against its
running minimum, and switches once staying would have cost a full round
trip more than the alternative.  This script prints every intermediate
quantity so the decision rule can be followed line by line.
"""

from switchlab import (
    CostPair,
    Decision,
    ImplSlot,
    SwitchCosts,
    apply_switch,
    new_policy,
    observe,
    run_sequence,
    window_certificate,
)

FIRST, SECOND = ImplSlot.FIRST, ImplSlot.SECOND

# first is expensive early and cheap late; second is the mirror image
costs = [CostPair(a, b) for a, b in zip([3, 3, 1, 1, 1], [1, 1, 3, 3, 3])]


def walk(sc: SwitchCosts) -> None:
    print(f"\nround-trip switching cost {sc.round_trip} "
          f"(charges: {sc.sc_12} forward, {sc.sc_21} back)")
    print(f"{'step':>4} {'cost@1':>7} {'cost@2':>7} {'delta':>7} "
          f"{'min':>6} {'recovery':>9} decision")
    state = new_policy(FIRST, sc.round_trip)
    for pair in costs:
        decision = observe(state, pair)
        recovery = state.delta - state.min_delta
        print(
            f"{state.step_index:>4} {pair.cost_first:>7.1f} {pair.cost_second:>7.1f} "
            f"{state.delta:>7.1f} {state.min_delta:>6.1f} {recovery:>9.1f} "
            f"{decision.value}{'  -> now on ' + state.active.opposite.value if decision is Decision.SWITCH else ''}"
        )
        if decision is Decision.SWITCH:
            apply_switch(state)


walk(SwitchCosts(3.0, 3.0))   # threshold 6: never recovered, stays on FIRST
walk(SwitchCosts(1.5, 1.5))   # threshold 3: two switches

events, total, deltas = run_sequence(costs, FIRST, SwitchCosts(1.5, 1.5))
print(f"\nfull run: total cost {total}, delta path {deltas}")
for event in events:
    j = window_certificate(costs, event, FIRST, 3.0)
    active = event.from_slot
    window = costs[j - 1 : event.step_index]
    a = sum(p.cost(active) for p in window)
    p = sum(p.cost(active.opposite) for p in window)
    print(
        f"switch at step {event.step_index} ({active.value} -> {event.to_slot.value}): "
        f"witness window [{j}..{event.step_index}], active cost {a}, "
        f"passive cost {p}, margin {a - p} >= 3"
    )
