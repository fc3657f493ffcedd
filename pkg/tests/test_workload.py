import math

import numpy as np
import pytest

from switchlab.workload import (
    Constant,
    DiscretizeMode,
    Piecewise,
    Sinusoidal,
    TickSample,
    Trace,
    discretize,
    intensities_at,
    load_trace,
)


def test_sinusoidal_intensities_at_landmarks():
    spec = Sinusoidal(W=2.0, omega=0.5)
    assert intensities_at(spec, 0.0) == (0.0, 2.0)
    t_pi = math.pi / 0.5
    n_r, n_w = intensities_at(spec, t_pi)
    assert n_r == pytest.approx(2.0, abs=1e-12) and n_w == pytest.approx(0.0, abs=1e-12)
    t_half = (math.pi / 2) / 0.5
    n_r, n_w = intensities_at(spec, t_half)
    assert n_r == pytest.approx(1.0, abs=1e-12) and n_w == pytest.approx(1.0, abs=1e-12)


def test_sinusoidal_range_and_sum_invariant():
    spec = Sinusoidal(W=3.3, omega=1.7)
    rng = np.random.default_rng(3)
    for t in rng.uniform(-50.0, 50.0, size=10_000):
        n_r, n_w = intensities_at(spec, float(t))
        assert 0.0 <= n_r <= spec.W and 0.0 <= n_w <= spec.W
        assert abs(n_r + n_w - spec.W) <= 1e-13 * spec.W


def test_discretize_conserves_sinusoid_mass():
    spec = Sinusoidal(W=1.0, omega=1.0)
    period = 2 * math.pi
    ticks = discretize(spec, 0.0, period, period / 1000)
    total_r = math.fsum(t.read_mass for t in ticks)
    total_w = math.fsum(t.write_mass for t in ticks)
    assert total_r == pytest.approx(math.pi, rel=1e-12)
    assert total_w == pytest.approx(math.pi, rel=1e-12)


def test_discretize_constant():
    ticks = discretize(Constant(2.0, 3.0), 0.0, 1.0, 0.5)
    assert len(ticks) == 2
    for t in ticks:
        assert (t.read_mass, t.write_mass) == (1.0, 1.5)


def test_discretize_partial_last_tick():
    ticks = discretize(Constant(1.0, 0.0), 0.0, 1.0, 0.3)
    assert len(ticks) == 4
    assert ticks[-1].dt == pytest.approx(0.1, abs=1e-12)
    assert math.fsum(t.read_mass for t in ticks) == pytest.approx(1.0, rel=1e-14)


def test_refining_dt_preserves_totals():
    spec = Sinusoidal(W=1.4, omega=2.1)
    horizon = 3 * math.pi
    coarse = discretize(spec, 0.0, horizon, horizon / 500)
    fine = discretize(spec, 0.0, horizon, horizon / 1000)
    for kind in ("read_mass", "write_mass"):
        a = math.fsum(getattr(t, kind) for t in coarse)
        b = math.fsum(getattr(t, kind) for t in fine)
        assert a == pytest.approx(b, rel=1e-12)


def test_integer_mode_conserves_counts():
    spec = Sinusoidal(W=1.0, omega=1.0)
    ticks = discretize(
        spec, 0.0, 2 * math.pi, 2 * math.pi / 500, DiscretizeMode.INTEGER_LARGEST_REMAINDER
    )
    total_r = sum(t.read_mass for t in ticks)
    assert total_r == float(int(total_r))  # integral masses
    assert abs(total_r - math.pi) < 1.0
    assert total_r in (math.floor(math.pi), math.ceil(math.pi))
    # running totals stay within one request of the exact integrals
    running = 0.0
    exact = 0.0
    for t in ticks:
        running += t.read_mass
        exact += 0.5 * ((t.end - t.t) - (math.sin(t.end) - math.sin(t.t)))
        assert abs(running - exact) <= 1.0


def test_piecewise_trapezoid_exact():
    spec = Piecewise(breakpoints=((0.0, 0.0, 4.0), (1.0, 2.0, 0.0), (3.0, 2.0, 2.0)))
    ticks = discretize(spec, 0.0, 3.0, 0.25)
    total_r = math.fsum(t.read_mass for t in ticks)
    total_w = math.fsum(t.write_mass for t in ticks)
    assert total_r == pytest.approx(1.0 + 4.0, rel=1e-12)  # triangle + rectangle
    assert total_w == pytest.approx(2.0 + 2.0, rel=1e-12)  # triangle + triangle to 2
    with pytest.raises(ValueError):
        intensities_at(spec, 3.5)


def test_discretize_warns_on_coarse_dt():
    spec = Sinusoidal(W=1.0, omega=1.0)
    with pytest.warns(RuntimeWarning):
        discretize(spec, 0.0, spec.period, spec.period / 10)


@pytest.mark.parametrize("dt,horizon", [(0.0, 1.0), (-0.1, 1.0), (0.1, 0.0), (0.1, -2.0)])
def test_discretize_rejects_bad_grid(dt, horizon):
    with pytest.raises(ValueError):
        discretize(Constant(1.0, 1.0), 0.0, horizon, dt)


def test_load_trace_roundtrip():
    csv = "t,dt,reads,writes\n0,1,5,3\n1,1,2,6\n"
    trace = load_trace(csv)
    assert len(trace.samples) == 2
    assert trace.samples[0] == TickSample(t=0.0, dt=1.0, read_mass=5.0, write_mass=3.0)
    assert intensities_at(trace, 1.5) == (2.0, 6.0)
    # discretize passes the grid through
    assert discretize(trace, 0.0, 2.0, 0.123) == list(trace.samples)
    assert discretize(trace, 1.0, 1.0, 0.5) == [trace.samples[1]]
    with pytest.raises(ValueError):
        discretize(trace, 0.5, 1.0, 0.5)  # misaligned window


def test_load_trace_errors_name_rows():
    with pytest.raises(ValueError, match="row 2"):
        load_trace("t,dt,reads,writes\n0,1,5,3\n1,1,-2,6\n")
    with pytest.raises(ValueError, match="row 2"):
        load_trace("t,dt,reads,writes\n0,1,5,3\n5,1,2,6\n")  # gap
    with pytest.raises(ValueError, match="row 1"):
        load_trace("t,dt,reads,writes\n0,1,abc,3\n")
    with pytest.raises(ValueError, match="no samples"):
        load_trace("t,dt,reads,writes\n")
    with pytest.raises(ValueError, match="header"):
        load_trace("time,dt,reads,writes\n0,1,5,3\n")
    with pytest.raises(ValueError, match="row 2"):
        load_trace("t,dt,reads,writes\n0,1,5,3\n1,0.5,2,6\n")  # dt changes


def test_trace_requires_contiguity():
    good = (TickSample(0.0, 1.0, 1.0, 1.0), TickSample(1.0, 1.0, 1.0, 1.0))
    Trace(samples=good)
    with pytest.raises(ValueError):
        Trace(samples=(good[0], TickSample(2.5, 1.0, 1.0, 1.0)))
