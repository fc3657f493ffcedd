"""Command-line interface.

Subcommands:
  simulate --scenario s.json --out DIR    write trace.csv, events.csv, summary.json
  analyze  --scenario s.json              print derived quantities and predictions
  oracle   --scenario s.json              offline optimum vs the online policy
  figures  --which N --out f.csv          reference-figure table (N in 1..3)
  sweep    --scenario s.json --param P --values a,b,c --out DIR
                                          one independent run per value

Exit codes: 0 success, 1 validation error (bad flags, paths, scenario
fields), 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analytic import (
    DeltaCurve,
    double_amplitude,
    estimate_derivatives,
    lagged_session_cost,
    per_cycle_recovery,
    predicted_switch_times,
    success_criterion,
)
from .oracle import competitive_report, opt_dp
from .policy import InvariantViolation, run_sequence
from .runner import events_csv, figure_csv, simulate, trace_csv
from .scenario import Scenario, load_scenario, role_of
from .workload import Sinusoidal

__all__ = ["run_cli", "main"]


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="switchlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario and write its outputs")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--out", required=True)

    p_ana = sub.add_parser("analyze", help="closed-form analysis of a scenario")
    p_ana.add_argument("--scenario", required=True)

    p_orc = sub.add_parser("oracle", help="offline optimum and competitive ratio")
    p_orc.add_argument("--scenario", required=True)

    p_fig = sub.add_parser("figures", help="emit a reference-figure CSV")
    p_fig.add_argument("--which", required=True, type=int, choices=(1, 2, 3))
    p_fig.add_argument("--out", required=True)
    p_fig.add_argument("--resolution", type=int, default=1000)

    p_swp = sub.add_parser("sweep", help="rerun a scenario across parameter values")
    p_swp.add_argument("--scenario", required=True)
    p_swp.add_argument("--param", required=True)
    p_swp.add_argument("--values", required=True)
    p_swp.add_argument("--out", required=True)
    return parser


def run_cli(argv: list[str]) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "figures":
            return _cmd_figures(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        raise _CliError(f"unknown command {args.command!r}")
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 2
    except (_CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _summary(scenario: Scenario, trace) -> dict:
    sc = scenario.switch_costs()
    opt = opt_dp(trace.cost_pairs, sc.sc_12, sc.sc_21, scenario.start_slot())
    ratio = competitive_report(trace.grand_total, opt)
    crit = _criterion_at_start(scenario)
    predicted = None
    if scenario.n_clients == 2 and isinstance(scenario.workload, Sinusoidal):
        predicted = predicted_switch_times(
            scenario.W, scenario.omega, sc.round_trip, scenario.start_slot(), scenario.horizon
        )
    return {
        "scenario": scenario.to_dict(),
        "switching_cost": {"sc_12": sc.sc_12, "sc_21": sc.sc_21, "round_trip": sc.round_trip},
        "totals": {
            "request_cost": trace.request_cost,
            "switch_charges": trace.switch_charges,
            "grand_total": trace.grand_total,
        },
        "n_events": len(trace.events),
        "events": [
            {
                "t": event.sim_time,
                "step": event.step_index,
                "from": role_of(event.from_slot).value,
                "to": role_of(event.to_slot).value,
                "charge": event.charged_cost,
            }
            for event in trace.events
        ],
        "opt_cost": opt.opt_cost,
        "opt_switch_count": opt.switch_count,
        "competitive_ratio": ratio if math.isfinite(ratio) else None,
        "criterion": crit,
        "predicted_switch_times": predicted,
    }


def _criterion_at_start(scenario: Scenario) -> dict:
    """Success-criterion verdict from the scenario's analytic delta at t0."""
    window = scenario.period / 10.0
    t = np.linspace(scenario.t0 - window / 2.0, scenario.t0 + window / 2.0, 25)
    curve = DeltaCurve(scenario.n_clients, scenario.W, scenario.omega)
    series = list(zip(t.tolist(), np.atleast_1d(curve.at(t)).tolist()))
    est = estimate_derivatives(series, scenario.t0, window)
    verdict = success_criterion(est.d1, est.d2, scenario.switch_costs().round_trip)
    return {
        "d1": est.d1,
        "d2": est.d2,
        "lhs": verdict.lhs,
        "rhs": verdict.rhs,
        "holds": verdict.holds,
        "t0": est.t0,
        "window": est.window,
    }


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    trace = simulate(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.csv").write_text(trace_csv(trace), encoding="utf-8")
    (out / "events.csv").write_text(events_csv(trace), encoding="utf-8")
    summary = _summary(scenario, trace)
    (out / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"simulated {len(trace.times)} ticks, {len(trace.events)} switch event(s), "
        f"grand total {trace.grand_total}"
    )
    print(f"wrote {out / 'trace.csv'}, {out / 'events.csv'}, {out / 'summary.json'}")
    return 0


def _cmd_analyze(args) -> int:
    scenario = load_scenario(args.scenario)
    sc = scenario.switch_costs()
    print(f"scenario: {args.scenario}")
    print(
        f"n_clients={scenario.n_clients} W={scenario.W} omega={scenario.omega} "
        f"start={scenario.start_impl.value} t0={scenario.t0} "
        f"horizon={scenario.horizon} dt={scenario.effective_dt()}"
    )
    print(f"switching cost: sc_12={sc.sc_12} sc_21={sc.sc_21} round_trip={sc.round_trip}")

    rise, fall = per_cycle_recovery(scenario.n_clients, scenario.W, scenario.omega)
    print(f"per-cycle recovery: nonsub-active={rise} sub-active={fall}")
    if scenario.n_clients == 2:
        amp = double_amplitude(
            DeltaCurve(2, scenario.W, scenario.omega), scenario.period
        )
        print(f"double amplitude of the delta curve: {amp}")
    else:
        print("double amplitude: n/a (delta drifts for n_clients != 2)")

    if scenario.n_clients == 2 and isinstance(scenario.workload, Sinusoidal):
        times = predicted_switch_times(
            scenario.W, scenario.omega, sc.round_trip, scenario.start_slot(), scenario.horizon
        )
        if times:
            print("predicted switch times: " + " ".join(repr(t) for t in times))
        else:
            print("predicted switch times: none (threshold above peak-to-trough range)")
    else:
        print("predicted switch times: n/a (2-client sinusoidal scenarios only)")

    crit = _criterion_at_start(scenario)
    print(
        f"success criterion at t0: holds={crit['holds']} "
        f"lhs=|d1|={crit['lhs']} rhs=2*sqrt(sc*|d2|)={crit['rhs']} "
        f"(d1={crit['d1']}, d2={crit['d2']}, local estimate)"
    )

    if scenario.n_clients == 2 and scenario.W == 1.0 and scenario.omega == 1.0 and 0.0 < sc.round_trip < 2.0:
        cost = lagged_session_cost(sc.round_trip)
        lo = lagged_session_cost(1e-12)
        hi = 15.0 * math.pi / 4.0 + 3.5
        print(f"lagged-session cost: {cost} (ideal {lo} .. worst {hi})")
    else:
        print(
            "lagged-session cost: n/a (normalized 2-client scenarios with "
            "round trip in (0, 2) only)"
        )
    return 0


def _cmd_oracle(args) -> int:
    scenario = load_scenario(args.scenario)
    trace = simulate(scenario)
    sc = scenario.switch_costs()
    opt = opt_dp(trace.cost_pairs, sc.sc_12, sc.sc_21, scenario.start_slot())
    events, alg_total, _ = run_sequence(trace.cost_pairs, scenario.start_slot(), sc)
    ratio = competitive_report(alg_total, opt)
    print(f"requests: {len(trace.cost_pairs)}")
    print(f"offline optimum: cost={opt.opt_cost} switches={opt.switch_count}")
    print(f"online policy:   cost={alg_total} switches={len(events)}")
    print(f"competitive ratio: {ratio}")
    return 0


def _cmd_figures(args) -> int:
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(figure_csv(args.which, args.resolution), encoding="utf-8")
    print(f"wrote {out}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise _CliError(f"--values must be comma-separated numbers, got {args.values!r}")
    if not values:
        raise _CliError("--values is empty")

    rows = []
    for value in sorted(values):
        variant = scenario.with_param(args.param, value)
        trace = simulate(variant)
        first_t = trace.events[0].sim_time if trace.events else ""
        rows.append(
            (
                args.param,
                value,
                len(trace.events),
                trace.request_cost,
                trace.switch_charges,
                trace.grand_total,
                first_t,
            )
        )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["param,value,n_events,request_cost,switch_charges,grand_total,first_event_t"]
    for param, value, n_events, req, chg, total, first_t in rows:
        first = repr(float(first_t)) if first_t != "" else ""
        lines.append(
            f"{param},{repr(float(value))},{n_events},{repr(float(req))},"
            f"{repr(float(chg))},{repr(float(total))},{first}"
        )
    (out / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out / 'sweep.csv'} ({len(rows)} runs)")
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
