"""The simulation loop coupling workload, cost model and switching policy.

Per tick: integrate the workload into request masses, price those masses
under both modes, feed the pair to the policy, book the active mode's cost,
and apply any switch (with its directional charge) before the next tick.
The recorded delta uses the fixed nonsub-minus-sub sign convention, whatever
slot is active, so traces compare directly against the analytic curves;
switch charges appear in the totals but never in the delta curve.

Every run is strictly sequential and deterministic: identical scenarios
produce byte-identical CSV output.  After the loop, every emitted switch is
validated against its window certificate; a failure there is an internal
invariant violation, not a user error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .analytic import DeltaCurve, predicted_switch_times
from .policy import (
    CostPair,
    Decision,
    ImplSlot,
    SwitchEvent,
    apply_switch,
    new_policy,
    observe,
    window_certificate,
)
from .pubsub import cost_rates
from .scenario import Role, Scenario, role_of
from .workload import Sinusoidal, discretize

__all__ = [
    "SimulationTrace",
    "simulate",
    "compare_to_analytic",
    "figures",
    "trace_csv",
    "events_csv",
    "figure_csv",
]

TRACE_HEADER = "t,delta,active,running_total,n_r,n_w"
EVENTS_HEADER = "t,from,to,charge"


@dataclass
class SimulationTrace:
    """Time series and totals of one simulation run."""

    scenario: Scenario
    times: np.ndarray  # tick end times
    deltas: np.ndarray  # nonsub minus sub, resets to 0 at each switch
    actives: list[Role]  # active role at the sample time (after any switch)
    running_totals: np.ndarray  # request costs plus charges booked so far
    n_r: np.ndarray  # mean read intensity over the tick
    n_w: np.ndarray
    events: list[SwitchEvent]
    request_cost: float
    switch_charges: float
    cost_pairs: list[CostPair] = field(repr=False, default_factory=list)

    @property
    def grand_total(self) -> float:
        return self.request_cost + self.switch_charges


def simulate(scenario: Scenario) -> SimulationTrace:
    costs_tbl = scenario.elementary()
    sc = scenario.switch_costs()
    ticks = discretize(
        scenario.workload,
        scenario.t0,
        scenario.horizon,
        scenario.effective_dt(),
        scenario.discretize_mode,
    )
    state = new_policy(scenario.start_slot(), sc.round_trip)

    n = len(ticks)
    times = np.empty(n)
    deltas = np.empty(n)
    running = np.empty(n)
    n_r = np.empty(n)
    n_w = np.empty(n)
    actives: list[Role] = []
    pairs: list[CostPair] = []
    events: list[SwitchEvent] = []
    request_cost = 0.0
    charges = 0.0

    for k, tick in enumerate(ticks):
        cost_nonsub, cost_sub = cost_rates(costs_tbl, tick.read_mass, tick.write_mass)
        pair = CostPair(cost_first=cost_nonsub, cost_second=cost_sub)
        pairs.append(pair)
        decision = observe(state, pair)
        request_cost += pair.cost(state.active)
        t_end = tick.end
        if decision is Decision.SWITCH:
            event = SwitchEvent(
                step_index=state.step_index,
                from_slot=state.active,
                to_slot=state.active.opposite,
                charged_cost=sc.charge(state.active),
                sim_time=t_end,
            )
            charges += event.charged_cost
            apply_switch(state)
            events.append(event)
        times[k] = t_end
        deltas[k] = state.delta if state.active is ImplSlot.FIRST else -state.delta
        actives.append(role_of(state.active))
        running[k] = request_cost + charges
        n_r[k] = tick.read_mass / tick.dt
        n_w[k] = tick.write_mass / tick.dt

    # every emitted switch must be witnessed by a cheaper-passive window
    for event in events:
        window_certificate(pairs, event, scenario.start_slot(), sc.round_trip)

    return SimulationTrace(
        scenario=scenario,
        times=times,
        deltas=deltas,
        actives=actives,
        running_totals=running,
        n_r=n_r,
        n_w=n_w,
        events=events,
        request_cost=request_cost,
        switch_charges=charges,
        cost_pairs=pairs,
    )


def compare_to_analytic(trace: SimulationTrace, formula: DeltaCurve) -> dict:
    """Measure a simulated trace against a closed-form delta curve.

    The sup-norm error covers the samples strictly before the first switch
    (the recorded delta resets to zero there while the closed form keeps
    integrating).  For 2-client sinusoidal scenarios the report also pairs
    each simulated switch with its predicted time.
    """
    if len(trace.times) == 0:
        raise ValueError("zero-length trace")
    scenario = trace.scenario
    if (
        formula.W != scenario.W
        or formula.omega != scenario.omega
        or formula.n_clients != scenario.n_clients
    ):
        raise ValueError(
            f"parameter mismatch: formula {formula} vs scenario "
            f"(n_clients={scenario.n_clients}, W={scenario.W}, omega={scenario.omega})"
        )
    if scenario.t0 != 0.0:
        raise ValueError("closed-form comparison requires t0 = 0")

    if trace.events:
        mask = trace.times < trace.events[0].sim_time
    else:
        mask = np.ones(len(trace.times), dtype=bool)
    if not mask.any():
        raise ValueError("no samples before the first switch to compare")
    sup_norm = float(np.max(np.abs(trace.deltas[mask] - formula.at(trace.times[mask]))))

    switch_time_errors: list[float] = []
    n_predicted = 0
    if scenario.n_clients == 2 and isinstance(scenario.workload, Sinusoidal):
        predicted = predicted_switch_times(
            scenario.W,
            scenario.omega,
            scenario.switch_costs().round_trip,
            scenario.start_slot(),
            scenario.horizon,
        )
        n_predicted = len(predicted)
        for event, t_pred in zip(trace.events, predicted):
            switch_time_errors.append(abs(event.sim_time - t_pred))

    return {
        "sup_norm_error": sup_norm,
        "switch_time_errors": switch_time_errors,
        "n_events": len(trace.events),
        "n_predicted": n_predicted,
    }


_FIGURE_CLIENTS = {1: 2, 2: 3, 3: 10}


def figures(which: int, resolution: int) -> tuple[list[str], list[tuple[float, ...]]]:
    """Reference-figure table: both delta curves over [0, 4 pi] at W = omega = 1.

    Figures 1, 2 and 3 use 2, 3 and 10 clients.  Figure 1 additionally
    carries the two horizontal guide lines at +-2, whose separation is the
    switching cost that makes the 2-client case thrash.
    """
    if which not in _FIGURE_CLIENTS:
        raise ValueError(f"unknown figure id {which!r}; figures are 1, 2, 3")
    if not isinstance(resolution, int) or isinstance(resolution, bool) or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    n_clients = _FIGURE_CLIENTS[which]
    t = np.linspace(0.0, 4.0 * math.pi, resolution)
    published = DeltaCurve(n_clients, 1.0, 1.0, published=True).at(t)
    model = DeltaCurve(n_clients, 1.0, 1.0, published=False).at(t)
    if which == 1:
        header = ["t", "delta_paper", "delta_model", "sc_upper", "sc_lower"]
        rows = [
            (float(ti), float(pi_), float(mi), 2.0, -2.0)
            for ti, pi_, mi in zip(t, published, model)
        ]
    else:
        header = ["t", "delta_paper", "delta_model"]
        rows = [(float(ti), float(pi_), float(mi)) for ti, pi_, mi in zip(t, published, model)]
    return header, rows


def _fmt(value: float) -> str:
    return repr(float(value))


def trace_csv(trace: SimulationTrace) -> str:
    lines = [TRACE_HEADER]
    for i in range(len(trace.times)):
        lines.append(
            ",".join(
                (
                    _fmt(trace.times[i]),
                    _fmt(trace.deltas[i]),
                    trace.actives[i].value,
                    _fmt(trace.running_totals[i]),
                    _fmt(trace.n_r[i]),
                    _fmt(trace.n_w[i]),
                )
            )
        )
    return "\n".join(lines) + "\n"


def events_csv(trace: SimulationTrace) -> str:
    lines = [EVENTS_HEADER]
    for event in trace.events:
        lines.append(
            ",".join(
                (
                    _fmt(event.sim_time),
                    role_of(event.from_slot).value,
                    role_of(event.to_slot).value,
                    _fmt(event.charged_cost),
                )
            )
        )
    return "\n".join(lines) + "\n"


def figure_csv(which: int, resolution: int) -> str:
    header, rows = figures(which, resolution)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"
