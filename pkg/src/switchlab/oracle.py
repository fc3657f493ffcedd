"""Offline-optimal switching schedules and competitive-ratio reporting.

The offline optimum knows the whole cost sequence in advance and picks the
cheapest schedule of active slots, paying the directional switch charge at
every transition (including an optional switch before the first request).
It is the benchmark the online policy is measured against.  A brute-force
enumerator over all 2^n schedules validates the dynamic program on small
instances; both use the same accumulation order and tie-break so their
results compare exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .policy import CostPair, ImplSlot

__all__ = ["OptResult", "opt_dp", "opt_bruteforce", "competitive_report"]

_BRUTEFORCE_LIMIT = 20


@dataclass(frozen=True)
class OptResult:
    opt_cost: float
    schedule: tuple[ImplSlot, ...]  # active slot per request
    switch_count: int


def _check_sc(sc_12: float, sc_21: float) -> None:
    for name, value in (("sc_12", sc_12), ("sc_21", sc_21)):
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


def opt_dp(
    costs: Sequence[CostPair],
    sc_12: float,
    sc_21: float,
    start: ImplSlot,
) -> OptResult:
    """Cheapest schedule by a two-state dynamic program.

    best[k][s] = cost of serving request k in slot s plus the cheaper of
    staying in s or switching into s after request k-1.  Ties break toward
    staying (fewer switches), which keeps schedules deterministic.  An empty
    sequence yields cost 0 and an empty schedule.
    """
    _check_sc(sc_12, sc_21)
    n = len(costs)
    if n == 0:
        return OptResult(opt_cost=0.0, schedule=(), switch_count=0)

    slots = (ImplSlot.FIRST, ImplSlot.SECOND)
    start_idx = slots.index(start)
    into = (sc_21, sc_12)  # charge paid to enter FIRST / SECOND

    # state entering request 0: possibly one switch before any request
    cost = [0.0, 0.0]
    switches = [0, 0]
    for s in range(2):
        if s != start_idx:
            cost[s] = into[s]
            switches[s] = 1
    came_from: list[tuple[int, int]] = []  # predecessor slot per (step, slot)

    for k in range(n):
        pair = costs[k]
        step_cost = (pair.cost_first, pair.cost_second)
        if k == 0:
            # the pre-request state already encodes the entry charge
            new_cost = [cost[s] + step_cost[s] for s in range(2)]
            new_switches = switches[:]
            came_from.append((0, 1))
        else:
            new_cost = [0.0, 0.0]
            new_switches = [0, 0]
            prev = [0, 0]
            for s in range(2):
                other = 1 - s
                stay = cost[s]
                move = cost[other] + into[s]
                if move < stay or (move == stay and switches[other] + 1 < switches[s]):
                    new_cost[s] = move + step_cost[s]
                    new_switches[s] = switches[other] + 1
                    prev[s] = other
                else:
                    new_cost[s] = stay + step_cost[s]
                    new_switches[s] = switches[s]
                    prev[s] = s
            came_from.append((prev[0], prev[1]))
        cost, switches = new_cost, new_switches

    final = min(range(2), key=lambda s: (cost[s], switches[s], s))
    schedule_idx = [0] * n
    s = final
    for k in range(n - 1, -1, -1):
        schedule_idx[k] = s
        s = came_from[k][s]

    switch_count = int(schedule_idx[0] != start_idx) + sum(
        schedule_idx[k] != schedule_idx[k - 1] for k in range(1, n)
    )
    return OptResult(
        opt_cost=cost[final],
        schedule=tuple(slots[i] for i in schedule_idx),
        switch_count=switch_count,
    )


def opt_bruteforce(
    costs: Sequence[CostPair],
    sc_12: float,
    sc_21: float,
    start: ImplSlot,
) -> OptResult:
    """Exhaustive optimum over all 2^n schedules (n <= 20).

    Evaluates each schedule with the same left-to-right accumulation order
    as opt_dp (entry charge, then per request: transition charge, then
    serving cost), so optimal costs match opt_dp bit for bit.
    """
    _check_sc(sc_12, sc_21)
    n = len(costs)
    if n == 0:
        return OptResult(opt_cost=0.0, schedule=(), switch_count=0)
    if n > _BRUTEFORCE_LIMIT:
        raise ValueError(f"brute force limited to {_BRUTEFORCE_LIMIT} requests, got {n}")

    slots = (ImplSlot.FIRST, ImplSlot.SECOND)
    start_idx = slots.index(start)
    masks = np.arange(2**n, dtype=np.int64)

    c1 = np.array([p.cost_first for p in costs])
    c2 = np.array([p.cost_second for p in costs])

    prev_state = np.full(len(masks), start_idx, dtype=np.int64)
    totals = np.zeros(len(masks))
    switch_counts = np.zeros(len(masks), dtype=np.int64)
    for k in range(n):
        state = (masks >> k) & 1
        changed = state != prev_state
        charge = np.where(state == 1, sc_12, sc_21)
        totals += np.where(changed, charge, 0.0)
        switch_counts += changed
        totals += np.where(state == 1, c2[k], c1[k])
        prev_state = state

    order = np.lexsort((masks, switch_counts, totals))
    best = int(order[0])
    schedule = tuple(slots[(best >> k) & 1] for k in range(n))
    return OptResult(
        opt_cost=float(totals[best]),
        schedule=schedule,
        switch_count=int(switch_counts[best]),
    )


def competitive_report(alg_cost: float, opt: OptResult) -> float:
    """Ratio of the online policy's cost to the offline optimum."""
    if not math.isfinite(alg_cost) or alg_cost < 0.0:
        raise ValueError(f"alg_cost must be finite and >= 0, got {alg_cost!r}")
    if opt.opt_cost > 0.0:
        return alg_cost / opt.opt_cost
    if alg_cost > 0.0:
        return math.inf
    return 1.0
