"""Online switching between two component implementations.

The decision rule tracks the accumulated cost of the active implementation
against the accumulated cost of the passive one.  Let delta be
(active cost) - (passive cost) summed since the last switch, and let
min_delta be the running minimum of delta (starting at zero).  The policy
orders a switch as soon as

    delta - min_delta >= round_trip_sc

i.e. as soon as there is a suffix window of requests over which the passive
implementation would have been cheaper by at least a full round trip of
switching costs.  The comparison is an exact >=, with no epsilon: behaviour
exactly at the threshold is a property of the model and is documented where
it matters instead of being fudged.

Everything in this module is a value-semantics state machine: no globals,
no shared interior state, identical inputs give identical outputs.  A state
instance must not be shared across threads without copying, but distinct
runs are independent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class ImplSlot(enum.Enum):
    """One of exactly two implementation slots."""

    FIRST = "first"
    SECOND = "second"

    @property
    def opposite(self) -> "ImplSlot":
        return ImplSlot.SECOND if self is ImplSlot.FIRST else ImplSlot.FIRST


class Decision(enum.Enum):
    STAY = "stay"
    SWITCH = "switch"


def _check_cost(value: float, name: str) -> None:
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class CostPair:
    """Cost of serving one request on each implementation."""

    cost_first: float
    cost_second: float

    def __post_init__(self) -> None:
        _check_cost(self.cost_first, "cost_first")
        _check_cost(self.cost_second, "cost_second")

    def cost(self, slot: ImplSlot) -> float:
        return self.cost_first if slot is ImplSlot.FIRST else self.cost_second


@dataclass(frozen=True)
class SwitchCosts:
    """Per-direction switch charges.

    The decision threshold always uses the round trip sc_12 + sc_21; the
    charge actually booked for a switch is directional.  sc_21 defaults to
    zero because switching back is typically far cheaper than switching in
    (no state has to be rebuilt), but it is configurable.
    """

    sc_12: float  # charge for FIRST -> SECOND
    sc_21: float = 0.0  # charge for SECOND -> FIRST

    def __post_init__(self) -> None:
        _check_cost(self.sc_12, "sc_12")
        _check_cost(self.sc_21, "sc_21")
        if self.round_trip <= 0.0:
            raise ValueError(
                "round trip switching cost must be > 0 "
                "(a zero threshold would oscillate on every request)"
            )

    @property
    def round_trip(self) -> float:
        return self.sc_12 + self.sc_21

    def charge(self, from_slot: ImplSlot) -> float:
        return self.sc_12 if from_slot is ImplSlot.FIRST else self.sc_21


@dataclass
class SwitchPolicyState:
    """Mutable accumulator state of the switching policy.

    Invariants (hold after every observe/apply_switch):
      * min_delta <= 0, non-increasing between switches
      * min_delta <= acc_active - acc_passive
      * immediately after a switch all accumulators are zero
    """

    active: ImplSlot
    round_trip_sc: float
    acc_active: float = 0.0
    acc_passive: float = 0.0
    min_delta: float = 0.0
    step_index: int = 0

    @property
    def delta(self) -> float:
        return self.acc_active - self.acc_passive


@dataclass(frozen=True)
class SwitchEvent:
    """A switch decision: emitted at step_index, applied before the next request."""

    step_index: int  # 1-based index of the observation that triggered the switch
    from_slot: ImplSlot
    to_slot: ImplSlot
    charged_cost: float
    sim_time: float | None = None  # seconds; None when stepping by requests

    def __post_init__(self) -> None:
        if self.from_slot is self.to_slot:
            raise ValueError("switch event must change the active slot")
        _check_cost(self.charged_cost, "charged_cost")


def new_policy(start: ImplSlot, round_trip_sc: float) -> SwitchPolicyState:
    """Fresh policy state: zeroed accumulators, `start` active."""
    if not math.isfinite(round_trip_sc) or round_trip_sc <= 0.0:
        raise ValueError(
            f"round_trip_sc must be finite and > 0, got {round_trip_sc!r}"
        )
    return SwitchPolicyState(active=start, round_trip_sc=round_trip_sc)


def observe(state: SwitchPolicyState, costs: CostPair) -> Decision:
    """Feed one request's cost pair; return the switch decision.

    Mutates the accumulators and the running minimum but never the active
    slot: the caller applies the decision with apply_switch, so the switch
    takes effect before the next request.
    """
    state.step_index += 1
    state.acc_active += costs.cost(state.active)
    state.acc_passive += costs.cost(state.active.opposite)
    delta = state.acc_active - state.acc_passive
    if delta < state.min_delta:
        state.min_delta = delta
    if delta - state.min_delta >= state.round_trip_sc:
        return Decision.SWITCH
    return Decision.STAY


def apply_switch(state: SwitchPolicyState) -> SwitchPolicyState:
    """Toggle the active slot and restart the accumulators from zero."""
    state.active = state.active.opposite
    state.acc_active = 0.0
    state.acc_passive = 0.0
    state.min_delta = 0.0
    return state


def run_sequence(
    costs: Sequence[CostPair],
    start: ImplSlot,
    sc: SwitchCosts,
) -> tuple[list[SwitchEvent], float, list[float]]:
    """Run the policy over a whole cost sequence.

    Returns (events, total_cost, deltas) where total_cost is the sum of the
    active slot's request costs plus the per-direction switch charges, and
    deltas[k] is the policy delta right after observation k+1 (before any
    reset from a switch at that step).
    """
    state = new_policy(start, sc.round_trip)
    events: list[SwitchEvent] = []
    deltas: list[float] = []
    total = 0.0
    for pair in costs:
        decision = observe(state, pair)
        deltas.append(state.delta)
        total += pair.cost(state.active)
        if decision is Decision.SWITCH:
            event = SwitchEvent(
                step_index=state.step_index,
                from_slot=state.active,
                to_slot=state.active.opposite,
                charged_cost=sc.charge(state.active),
            )
            total += event.charged_cost
            apply_switch(state)
            events.append(event)
    return events, total, deltas


def window_certificate(
    cost_history: Sequence[CostPair],
    event: SwitchEvent,
    start: ImplSlot,
    round_trip_sc: float,
) -> int:
    """Witness a switch decision with an explicit request window.

    Replays the policy over cost_history and, for the given event at step
    k, returns the smallest 1-based index j such that over requests j..k the
    passive implementation was cheaper than the active one by at least the
    round-trip switching cost:

        sum(passive costs, j..k) <= sum(active costs, j..k) - round_trip_sc

    The trigger condition guarantees such a j exists (the running-minimum
    step works); failure to find one, or an event that the replay does not
    actually emit, raises InvariantViolation.
    """
    if not 1 <= event.step_index <= len(cost_history):
        raise ValueError(
            f"event step {event.step_index} outside history of "
            f"length {len(cost_history)}"
        )
    state = new_policy(start, round_trip_sc)
    reset_step = 0
    seg_deltas = [0.0]  # policy delta at steps reset_step .. current
    for k, pair in enumerate(cost_history, start=1):
        decision = observe(state, pair)
        seg_deltas.append(state.delta)
        if k == event.step_index:
            if decision is not Decision.SWITCH:
                raise InvariantViolation(
                    f"step {k} did not trigger a switch on this history"
                )
            if state.active is not event.from_slot:
                raise InvariantViolation(
                    f"event claims switch from {event.from_slot} but replay "
                    f"has {state.active} active at step {k}"
                )
            break
        if decision is Decision.SWITCH:
            apply_switch(state)
            reset_step = k
            seg_deltas = [0.0]
    else:
        raise InvariantViolation("event step not reached during replay")

    delta_k = seg_deltas[-1]
    j = None
    for offset in range(len(seg_deltas) - 1):
        if delta_k - seg_deltas[offset] >= round_trip_sc:
            j = reset_step + offset + 1
            break
    if j is None:
        raise InvariantViolation(
            "no certificate window found for a triggered switch; "
            "the policy accumulators are inconsistent"
        )

    # Re-sum the window directly as an independent check of the witness.
    active = event.from_slot
    active_sum = math.fsum(p.cost(active) for p in cost_history[j - 1 : event.step_index])
    passive_sum = math.fsum(
        p.cost(active.opposite) for p in cost_history[j - 1 : event.step_index]
    )
    if not passive_sum <= active_sum - round_trip_sc + 1e-9 * max(1.0, active_sum):
        raise InvariantViolation(
            f"certificate window [{j}, {event.step_index}] does not satisfy "
            f"the switching inequality: passive {passive_sum} vs "
            f"active {active_sum} - sc {round_trip_sc}"
        )
    return j
