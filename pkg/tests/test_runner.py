import json
import math

import numpy as np
import pytest

from switchlab.analytic import DeltaCurve, predicted_switch_times
from switchlab.oracle import opt_dp
from switchlab.policy import ImplSlot
from switchlab.runner import (
    SimulationTrace,
    compare_to_analytic,
    events_csv,
    figure_csv,
    figures,
    simulate,
    trace_csv,
)
from switchlab.scenario import (
    ExplicitSC,
    Role,
    Scenario,
    load_scenario,
    scenario_from_dict,
)
from switchlab.workload import Constant, DiscretizeMode, Sinusoidal

PI = math.pi


def two_client_scenario(sc_12, horizon, dt=1e-3, start=Role.NONSUB):
    return Scenario(
        n_clients=2,
        W=1.0,
        omega=1.0,
        workload=Sinusoidal(1.0, 1.0),
        sc_spec=ExplicitSC(sc_12=sc_12, sc_21=0.0),
        start_impl=start,
        horizon=horizon,
        dt=dt,
    )


def test_simulate_matches_closed_form_before_first_switch():
    scenario = two_client_scenario(sc_12=8.0, horizon=2 * PI, dt=1e-3)
    trace = simulate(scenario)
    assert trace.events == []
    report = compare_to_analytic(trace, DeltaCurve(2, 1.0, 1.0))
    assert report["sup_norm_error"] <= 1e-10
    assert trace.grand_total == pytest.approx(trace.request_cost)


def test_simulate_thrash_events_match_predictions():
    scenario = two_client_scenario(sc_12=3.0, horizon=4 * PI, dt=1e-3)
    trace = simulate(scenario)
    predicted = predicted_switch_times(1.0, 1.0, 3.0, ImplSlot.FIRST, 4 * PI)
    assert len(trace.events) == len(predicted) == 3
    for event, t_pred in zip(trace.events, predicted):
        assert t_pred - 1e-9 <= event.sim_time <= t_pred + 2 * scenario.dt
    report = compare_to_analytic(trace, DeltaCurve(2, 1.0, 1.0))
    assert report["n_events"] == report["n_predicted"] == 3
    assert max(report["switch_time_errors"]) <= 2 * scenario.dt
    # certificates were validated inside simulate; charges are directional
    assert trace.switch_charges == pytest.approx(3.0 + 0.0 + 3.0)


def test_simulate_constant_balanced_workload_never_switches():
    # with two clients i_n == i_s exactly when n_r == n_w
    scenario = Scenario(
        n_clients=2,
        W=1.0,
        omega=1.0,
        workload=Constant(n_r=2.0, n_w=2.0),
        sc_spec=ExplicitSC(sc_12=0.5, sc_21=0.0),
        start_impl=Role.NONSUB,
        horizon=10.0,
        dt=0.1,
    )
    trace = simulate(scenario)
    assert trace.events == []
    assert np.max(np.abs(trace.deltas)) <= 1e-9


def test_simulate_sign_convention_is_nonsub_minus_sub():
    # starting on sub must flip the policy delta back to the fixed convention
    scenario = two_client_scenario(sc_12=8.0, horizon=2.0, dt=1e-3, start=Role.SUB)
    trace = simulate(scenario)
    expected = DeltaCurve(2, 1.0, 1.0).at(trace.times)
    assert np.max(np.abs(trace.deltas - expected)) <= 1e-10


def test_grand_total_bounded_by_offline_optimum():
    scenario = two_client_scenario(sc_12=3.0, horizon=2 * PI, dt=2e-3)
    trace = simulate(scenario)
    sc = scenario.switch_costs()
    opt = opt_dp(trace.cost_pairs, sc.sc_12, sc.sc_21, scenario.start_slot())
    assert opt.opt_cost <= trace.grand_total


def test_simulate_integer_mode_runs():
    scenario = Scenario(
        n_clients=2,
        W=30.0,
        omega=1.0,
        workload=Sinusoidal(30.0, 1.0),
        sc_spec=ExplicitSC(sc_12=5.0, sc_21=0.0),
        start_impl=Role.NONSUB,
        horizon=2 * PI,
        dt=PI / 500,
        discretize_mode=DiscretizeMode.INTEGER_LARGEST_REMAINDER,
    )
    trace = simulate(scenario)
    # per-tick request masses are integral in this mode
    masses = trace.n_r * scenario.dt
    assert np.max(np.abs(masses - np.round(masses))) < 1e-9


def test_compare_to_analytic_validation():
    scenario = two_client_scenario(sc_12=8.0, horizon=1.0, dt=1e-2)
    trace = simulate(scenario)
    with pytest.raises(ValueError, match="mismatch"):
        compare_to_analytic(trace, DeltaCurve(2, 2.0, 1.0))
    empty = SimulationTrace(
        scenario=scenario,
        times=np.array([]),
        deltas=np.array([]),
        actives=[],
        running_totals=np.array([]),
        n_r=np.array([]),
        n_w=np.array([]),
        events=[],
        request_cost=0.0,
        switch_charges=0.0,
    )
    with pytest.raises(ValueError, match="zero-length"):
        compare_to_analytic(empty, DeltaCurve(2, 1.0, 1.0))


def test_halving_dt_moves_events_by_less_than_coarse_dt():
    coarse = simulate(two_client_scenario(sc_12=3.0, horizon=4 * PI, dt=2e-3))
    fine = simulate(two_client_scenario(sc_12=3.0, horizon=4 * PI, dt=1e-3))
    assert len(coarse.events) == len(fine.events) == 3
    for a, b in zip(coarse.events, fine.events):
        assert abs(a.sim_time - b.sim_time) < 2e-3


def test_csv_output_is_deterministic():
    scenario = two_client_scenario(sc_12=3.0, horizon=PI, dt=1e-3)
    a = trace_csv(simulate(scenario))
    b = trace_csv(simulate(scenario))
    assert a == b
    assert a.splitlines()[0] == "t,delta,active,running_total,n_r,n_w"


def test_events_csv_format():
    scenario = two_client_scenario(sc_12=3.0, horizon=4 * PI, dt=1e-3)
    text = events_csv(simulate(scenario))
    lines = text.splitlines()
    assert lines[0] == "t,from,to,charge"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[1] == "nonsub" and first[2] == "sub"
    assert float(first[3]) == 3.0


def test_figures_tables():
    header, rows = figures(1, 101)
    assert header == ["t", "delta_paper", "delta_model", "sc_upper", "sc_lower"]
    assert len(rows) == 101
    t_mid = rows[50][0]
    assert rows[50][1] == pytest.approx(-2 * math.sin(t_mid), abs=1e-14)
    assert all(row[3] - row[4] == 4.0 for row in rows)

    header2, rows2 = figures(2, 11)
    assert header2 == ["t", "delta_paper", "delta_model"]
    # documented inconsistency: published and model curves differ for n=3
    deviation = max(abs(r[1] - r[2]) for r in rows2)
    assert deviation > 0.5

    header3, rows3 = figures(3, 11)
    assert rows3[0][1] == pytest.approx(0.0, abs=1e-14)

    with pytest.raises(ValueError):
        figures(4, 10)
    with pytest.raises(ValueError):
        figures(1, 1)


def test_figure_csv_roundtrip_precision():
    text = figure_csv(1, 33)
    lines = text.splitlines()
    for line in lines[1:]:
        t, paper, model, up, lo = (float(x) for x in line.split(","))
        assert paper == pytest.approx(-2 * math.sin(t), abs=1e-12)
        assert model == pytest.approx(-2 * math.sin(t), abs=1e-12)


def test_scenario_json_roundtrip(tmp_path):
    raw = {
        "n_clients": 2,
        "W": 1.0,
        "omega": 1.0,
        "workload": {"type": "sinusoidal"},
        "sc_spec": {"type": "coverage", "lambda": math.pi / 2},
        "start_impl": "nonsub",
        "horizon": 4 * PI,
        "dt": 1e-4,
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(raw))
    scenario = load_scenario(path)
    assert scenario.switch_costs().round_trip == 4.0
    assert scenario.start_slot() is ImplSlot.FIRST
    again = scenario_from_dict(scenario.to_dict())
    assert again.switch_costs() == scenario.switch_costs()


def test_scenario_rejects_unknown_and_missing_fields():
    base = {
        "n_clients": 2,
        "W": 1.0,
        "omega": 1.0,
        "sc_spec": {"type": "explicit", "sc_12": 1.0},
        "start_impl": "sub",
        "horizon": 1.0,
    }
    scenario_from_dict(dict(base))  # valid
    with pytest.raises(ValueError, match="unknown field 'typo'"):
        scenario_from_dict(dict(base, typo=1))
    with pytest.raises(ValueError, match="missing field 'horizon'"):
        scenario_from_dict({k: v for k, v in base.items() if k != "horizon"})
    with pytest.raises(ValueError, match="lambda"):
        scenario_from_dict(dict(base, sc_spec={"type": "coverage"}))
    with pytest.raises(ValueError, match="start_impl"):
        scenario_from_dict(dict(base, start_impl="both"))
    with pytest.raises(ValueError, match="n_clients"):
        scenario_from_dict(dict(base, n_clients=0))


def test_scenario_with_trace_workload(tmp_path):
    trace_csv_text = "t,dt,reads,writes\n" + "".join(
        f"{i * 0.5},0.5,{2 + (i % 3)},1\n" for i in range(20)
    )
    trace_path = tmp_path / "load.csv"
    trace_path.write_text(trace_csv_text)
    scenario_path = tmp_path / "s.json"
    scenario_path.write_text(
        json.dumps(
            {
                "n_clients": 2,
                "W": 1.0,
                "omega": 1.0,
                "workload": {"type": "trace", "path": "load.csv"},
                "sc_spec": {"type": "explicit", "sc_12": 2.0},
                "start_impl": "sub",
                "horizon": 10.0,
                "dt": 0.5,
            }
        )
    )
    scenario = load_scenario(scenario_path)
    trace = simulate(scenario)
    assert len(trace.times) == 20
    assert trace.request_cost > 0.0


def test_scenario_with_piecewise_workload():
    scenario = scenario_from_dict(
        {
            "n_clients": 3,
            "W": 1.0,
            "omega": 1.0,
            "workload": {"type": "piecewise", "breakpoints": [[0, 1, 3], [5, 3, 1]]},
            "sc_spec": {"type": "explicit", "sc_12": 1.5},
            "start_impl": "nonsub",
            "horizon": 5.0,
            "dt": 0.05,
        }
    )
    trace = simulate(scenario)
    # reads ramp up while writes ramp down, so sub mode gains ground
    assert trace.deltas[-1] > trace.deltas[0] or trace.events


def test_scenario_default_dt_and_sweep_param():
    scenario = scenario_from_dict(
        {
            "n_clients": 2,
            "W": 1.0,
            "omega": 2.0,
            "sc_spec": {"type": "explicit", "sc_12": 1.0},
            "start_impl": "nonsub",
            "horizon": 3.0,
        }
    )
    assert scenario.effective_dt() == pytest.approx(scenario.period / 1e4)
    bumped = scenario.with_param("W", 2.0)
    assert bumped.W == 2.0 and bumped.workload == Sinusoidal(2.0, 2.0)
    with pytest.raises(ValueError, match="lambda"):
        scenario.with_param("lambda", 1.0)
    with pytest.raises(ValueError, match="unknown sweep parameter"):
        scenario.with_param("frequency", 1.0)
