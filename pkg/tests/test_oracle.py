import math

import numpy as np
import pytest

from switchlab.oracle import competitive_report, opt_bruteforce, opt_dp
from switchlab.policy import CostPair, ImplSlot, SwitchCosts, run_sequence

F, S = ImplSlot.FIRST, ImplSlot.SECOND


def pairs_of(first, second):
    return [CostPair(float(a), float(b)) for a, b in zip(first, second)]


WORKED = pairs_of([3, 3, 1, 1, 1], [1, 1, 3, 3, 3])


def test_worked_example_stays_on_first():
    opt = opt_dp(WORKED, 3.0, 3.0, F)
    assert opt.opt_cost == 9.0
    assert opt.schedule == (F,) * 5
    assert opt.switch_count == 0
    bf = opt_bruteforce(WORKED, 3.0, 3.0, F)
    assert bf.opt_cost == 9.0 and bf.switch_count == 0


def test_free_switching_takes_pointwise_minimum():
    rng = np.random.default_rng(2)
    costs = pairs_of(rng.uniform(0, 9, 30), rng.uniform(0, 9, 30))
    opt = opt_dp(costs, 0.0, 0.0, F)
    expected = sum(min(p.cost_first, p.cost_second) for p in costs)
    assert opt.opt_cost == pytest.approx(expected, rel=1e-12)


def test_single_request_switch_not_worth_it():
    opt = opt_dp([CostPair(5.0, 1.0)], 10.0, 0.0, F)
    assert opt.opt_cost == 5.0 and opt.switch_count == 0


def test_pre_first_request_switch_allowed():
    opt = opt_dp([CostPair(5.0, 1.0)], 1.0, 0.0, F)
    assert opt.opt_cost == 2.0
    assert opt.schedule == (S,) and opt.switch_count == 1


def test_empty_sequence():
    for fn in (opt_dp, opt_bruteforce):
        result = fn([], 1.0, 1.0, F)
        assert result.opt_cost == 0.0 and result.schedule == () and result.switch_count == 0


def test_bruteforce_length_cap():
    costs = pairs_of(np.ones(21), np.ones(21))
    with pytest.raises(ValueError):
        opt_bruteforce(costs, 1.0, 1.0, F)


def _random_instance(rng, max_n=12):
    n = int(rng.integers(1, max_n + 1))
    costs = pairs_of(rng.uniform(0, 10, n), rng.uniform(0, 10, n))
    sc_12 = float(rng.uniform(0, 5))
    sc_21 = float(rng.uniform(0, 5))
    start = F if rng.integers(2) == 0 else S
    return costs, sc_12, sc_21, start


def test_dp_matches_bruteforce_exactly_on_1000_instances():
    rng = np.random.default_rng(424242)
    for _ in range(1000):
        costs, sc_12, sc_21, start = _random_instance(rng)
        dp = opt_dp(costs, sc_12, sc_21, start)
        bf = opt_bruteforce(costs, sc_12, sc_21, start)
        assert dp.opt_cost == bf.opt_cost  # exact, same accumulation order
        assert dp.switch_count == bf.switch_count


def test_dp_never_beaten_by_online_policy():
    rng = np.random.default_rng(77)
    for _ in range(300):
        costs, sc_12, sc_21, start = _random_instance(rng, max_n=40)
        if sc_12 + sc_21 <= 0.0:
            sc_12 = 0.5
        dp = opt_dp(costs, sc_12, sc_21, start)
        _, alg_total, _ = run_sequence(costs, start, SwitchCosts(sc_12, sc_21))
        assert dp.opt_cost <= alg_total


def test_opt_cost_monotone_in_switch_costs():
    rng = np.random.default_rng(123)
    for _ in range(200):
        costs, sc_12, sc_21, start = _random_instance(rng)
        base = opt_dp(costs, sc_12, sc_21, start)
        bumped = opt_dp(costs, sc_12 + 0.7, sc_21, start)
        assert bumped.opt_cost >= base.opt_cost - 1e-12
        bumped2 = opt_dp(costs, sc_12, sc_21 + 1.3, start)
        assert bumped2.opt_cost >= base.opt_cost - 1e-12


def test_competitive_report():
    nine = opt_dp(WORKED, 3.0, 3.0, F)
    assert competitive_report(18.0, nine) == 2.0
    assert competitive_report(9.0, nine) == 1.0
    zero = opt_dp([CostPair(0.0, 0.0)], 1.0, 1.0, F)
    assert zero.opt_cost == 0.0
    assert competitive_report(3.0, zero) == math.inf
    assert competitive_report(0.0, zero) == 1.0


def test_online_policy_matches_opt_on_worked_example():
    events, total, _ = run_sequence(WORKED, F, SwitchCosts(3.0, 3.0))
    opt = opt_dp(WORKED, 3.0, 3.0, F)
    assert total == 9.0 and events == []
    assert competitive_report(total, opt) == 1.0
