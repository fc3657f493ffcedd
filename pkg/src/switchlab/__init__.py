"""switchlab: a deterministic laboratory for online implementation switching.

Two implementations serve the same request stream at different costs, and
switching between them costs something too.  This package provides the
threshold switching policy, a pub/sub cost model with synthetic and trace
workloads, closed-form oracles for the sinusoidal case, an offline-optimal
benchmark, and a scenario runner with CSV/JSON outputs.
"""

from .analytic import (
    CriterionVerdict,
    DeltaCurve,
    DerivativeEstimate,
    delta_model,
    delta_published,
    double_amplitude,
    estimate_derivatives,
    lagged_session_cost,
    lagged_session_cost_quadrature,
    parabola,
    per_cycle_recovery,
    predicted_switch_times,
    success_criterion,
)
from .oracle import OptResult, competitive_report, opt_bruteforce, opt_dp
from .policy import (
    CostPair,
    Decision,
    ImplSlot,
    InvariantViolation,
    SwitchCosts,
    SwitchEvent,
    SwitchPolicyState,
    apply_switch,
    new_policy,
    observe,
    run_sequence,
    window_certificate,
)
from .pubsub import (
    CoverageSpec,
    PubSubCosts,
    cost_rates,
    coverage_for_switching_cost,
    elementary_costs,
    switching_cost_coverage,
    switching_cost_trace,
)
from .runner import SimulationTrace, compare_to_analytic, figures, simulate
from .scenario import CoverageSC, ExplicitSC, Role, Scenario, load_scenario
from .workload import (
    Constant,
    DiscretizeMode,
    IntensitySpec,
    Piecewise,
    Sinusoidal,
    TickSample,
    Trace,
    discretize,
    intensities_at,
    load_trace,
)

__version__ = "0.1.0"

__all__ = [
    "CostPair",
    "Decision",
    "ImplSlot",
    "InvariantViolation",
    "SwitchCosts",
    "SwitchEvent",
    "SwitchPolicyState",
    "apply_switch",
    "new_policy",
    "observe",
    "run_sequence",
    "window_certificate",
    "PubSubCosts",
    "CoverageSpec",
    "elementary_costs",
    "cost_rates",
    "switching_cost_coverage",
    "switching_cost_trace",
    "coverage_for_switching_cost",
    "Sinusoidal",
    "Constant",
    "Piecewise",
    "Trace",
    "IntensitySpec",
    "TickSample",
    "DiscretizeMode",
    "intensities_at",
    "discretize",
    "load_trace",
    "DeltaCurve",
    "DerivativeEstimate",
    "CriterionVerdict",
    "delta_model",
    "delta_published",
    "predicted_switch_times",
    "lagged_session_cost",
    "lagged_session_cost_quadrature",
    "parabola",
    "success_criterion",
    "estimate_derivatives",
    "double_amplitude",
    "per_cycle_recovery",
    "OptResult",
    "opt_dp",
    "opt_bruteforce",
    "competitive_report",
    "Role",
    "CoverageSC",
    "ExplicitSC",
    "Scenario",
    "load_scenario",
    "SimulationTrace",
    "simulate",
    "compare_to_analytic",
    "figures",
]
