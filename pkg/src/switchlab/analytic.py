"""Closed-form oracles for the sinusoidal pub/sub workload.

Under the sinusoidal workload and the standard elementary costs, the
accumulated cost difference between nonsub and sub modes is

    delta(t) = integral[0..t] (i_n - i_s)
             = W/2 * ((2 - N) t - (N + 2)/omega * sin(omega t))

with N the number of clients (delta_model).  For N = 2 this reduces to the
pure sinusoid -2 W/omega * sin(omega t).  The separately published
closed forms for N = 3 and N = 10 (delta_published) do not follow from the
cost model above; they are kept verbatim for figure reproduction, and the
discrepancy is documented in the tests rather than resolved.

Also here: the predicted switch times of the threshold policy on the N = 2
sinusoid, the lagged-switch session cost identity with its quadrature twin,
the parabola bound with its success criterion on the first two derivatives,
and least-squares derivative estimation for measured delta curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .policy import ImplSlot

__all__ = [
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
]

_HALF_PI = 0.5 * math.pi


def _require_positive(value: float, name: str) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")


def delta_model(n_clients: int, W: float, omega: float, t):
    """Model-consistent accumulated cost difference nonsub minus sub.

    Exact integral of the cost-rate difference from 0 to t:
    W/2 * ((2 - N) t - (N + 2)/omega * sin(omega t)).  Accepts scalar or
    array t.
    """
    if n_clients < 1:
        raise ValueError(f"n_clients must be >= 1, got {n_clients}")
    _require_positive(W, "W")
    _require_positive(omega, "omega")
    n = n_clients
    t_arr = np.asarray(t, dtype=float)
    out = 0.5 * W * ((2.0 - n) * t_arr - (n + 2.0) / omega * np.sin(omega * t_arr))
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def delta_published(n_clients: int, W: float, omega: float, t):
    """As-published closed forms for 2, 3 and 10 clients, kept verbatim.

    Only the 2-client curve agrees with delta_model; the 3- and 10-client
    curves are reproduced for figure output even though they cannot be
    derived from the cost model here.
    """
    _require_positive(W, "W")
    _require_positive(omega, "omega")
    t_arr = np.asarray(t, dtype=float)
    u = omega * t_arr
    if n_clients == 2:
        out = -2.0 * W / omega * np.sin(u)
    elif n_clients == 3:
        out = -2.0 * W / omega * np.sin(u) * (1.0 + np.cos(u))
    elif n_clients == 10:
        out = 0.5 * W / omega * (2.0 * np.cos(u) - 11.0 * np.sin(u) - 9.0 * u - 2.0)
    else:
        raise ValueError(
            f"no published closed form for n_clients={n_clients}; use delta_model"
        )
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


@dataclass(frozen=True)
class DeltaCurve:
    """A closed-form delta curve, either model-consistent or as published."""

    n_clients: int
    W: float
    omega: float
    published: bool = False

    def __post_init__(self) -> None:
        _require_positive(self.W, "W")
        _require_positive(self.omega, "omega")
        if self.published and self.n_clients not in (2, 3, 10):
            raise ValueError(
                f"published curves exist only for 2, 3, 10 clients, "
                f"got {self.n_clients}"
            )
        if not self.published and self.n_clients < 1:
            raise ValueError(f"n_clients must be >= 1, got {self.n_clients}")

    def at(self, t):
        if self.published:
            return delta_published(self.n_clients, self.W, self.omega, t)
        return delta_model(self.n_clients, self.W, self.omega, t)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def periodic(self) -> bool:
        # the model curve drifts like (2 - N) t unless N = 2; the published
        # 10-client curve carries an explicit -9 omega t drift
        if self.published:
            return self.n_clients in (2, 3)
        return self.n_clients == 2


def predicted_switch_times(
    W: float,
    omega: float,
    sc_round_trip: float,
    start: ImplSlot,
    horizon: float,
) -> list[float]:
    """Switch times of the threshold policy on the 2-client sinusoid.

    The policy delta while FIRST (nonsub) is active follows
    -A sin(omega t) with A = 2 W/omega, and +A sin(omega t) while SECOND is
    active.  A switch fires when the delta has recovered from its running
    minimum by sc_round_trip.  Each recovery crossing is solved exactly per
    monotone branch of sin via arcsin, which also resolves the tangent case
    sc_round_trip == 2A (the threshold exactly equal to the peak-to-trough
    range) where a sampled bracketing search would find no sign change.

    Returns strictly increasing times in (0, horizon]; empty when
    sc_round_trip exceeds 2A, since the recovery can never reach it.
    """
    _require_positive(W, "W")
    _require_positive(omega, "omega")
    _require_positive(horizon, "horizon")
    if not math.isfinite(sc_round_trip) or sc_round_trip <= 0.0:
        raise ValueError(
            f"sc_round_trip must be finite and > 0, got {sc_round_trip!r}"
        )
    amplitude = 2.0 * W / omega
    if sc_round_trip > 2.0 * amplitude:
        return []
    q = sc_round_trip / amplitude  # threshold in sin units, in (0, 2]
    u_end = omega * horizon

    # sign +1: FIRST active, recovery = A * (max sin - sin); triggers while
    # sin descends.  sign -1: SECOND active, recovery = A * (sin - min sin);
    # triggers while sin ascends.  ext is the running extreme of sin since
    # the last reset (max for +1, min for -1).
    sign = 1.0 if start is ImplSlot.FIRST else -1.0
    u_cur = 0.0
    ext = 0.0  # sin(0)
    times_u: list[float] = []
    n = math.floor((u_cur - _HALF_PI) / math.pi + 1e-12) + 1
    while True:
        e = _HALF_PI + n * math.pi  # next extreme of sin
        if e - math.pi > u_end:
            break
        ends_at_peak = n % 2 == 0  # sin(e) = +1 at peaks, -1 at troughs
        if sign > 0:
            if ends_at_peak:
                ext = max(ext, math.sin(e))
            else:
                ext = max(ext, math.sin(u_cur))
                target = ext - q
                if target >= -1.0:
                    u_star = e - _HALF_PI - math.asin(target)
                    u_star = max(u_star, u_cur)
                    if u_star > u_end * (1.0 + 1e-12):
                        break
                    times_u.append(u_star)
                    sign = -1.0
                    u_cur = u_star
                    ext = target  # sin(u_star) by construction
                    continue  # finish this interval as the new segment
        else:
            if ends_at_peak:
                ext = min(ext, math.sin(u_cur))
                target = ext + q
                if target <= 1.0:
                    u_star = e - _HALF_PI + math.asin(target)
                    u_star = max(u_star, u_cur)
                    if u_star > u_end * (1.0 + 1e-12):
                        break
                    times_u.append(u_star)
                    sign = 1.0
                    u_cur = u_star
                    ext = target
                    continue
            else:
                ext = min(ext, math.sin(e))
        u_cur = e
        n += 1
    return [u / omega for u in times_u]


def lagged_session_cost(sc: float) -> float:
    """Accumulated serving cost of a lagged-switch session, closed form.

    Normalized units (W = omega = 1, two clients).  Over the session
    [0, 5 pi/2] the policy runs the cheap mode on each falling stretch of
    the cost difference and switches arcsin(sc - 1) after each crossover;
    the served cost comes out to 15 pi/4 - 9/2 + 4 sc.  The sc -> 0 limit
    is the ideal cost (cheaper mode always active), the sc -> 2 limit the
    worst case (dearer mode always active).  Switch charges are not
    included; the simulator books them separately.
    """
    _check_session_sc(sc)
    return 15.0 * math.pi / 4.0 - 4.5 + 4.0 * sc


def lagged_session_cost_quadrature(sc: float) -> float:
    """Same session cost, but numerically integrating the five stretches."""
    from scipy.integrate import quad

    _check_session_sc(sc)

    def i_n(t: float) -> float:
        return 1.5 - 0.5 * math.cos(t)

    def i_s(t: float) -> float:
        return 1.5 + 1.5 * math.cos(t)

    a = math.asin(sc - 1.0)
    pieces = (
        (i_n, 0.0, _HALF_PI),
        (i_n, _HALF_PI, math.pi + a),
        (i_s, math.pi + a, 3.0 * _HALF_PI),
        (i_s, 3.0 * _HALF_PI, 2.0 * math.pi + a),
        (i_n, 2.0 * math.pi + a, 5.0 * _HALF_PI),
    )
    total = 0.0
    for f, lo, hi in pieces:
        value, _ = quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
        total += value
    return total


def _check_session_sc(sc: float) -> None:
    if not math.isfinite(sc) or not 0.0 < sc < 2.0:
        raise ValueError(
            f"sc must lie in (0, 2) in normalized units (arcsin domain), got {sc!r}"
        )


def parabola(d1: float, d2: float, t: float) -> float:
    """The bounding parabola p(t) = d2/2 * t^2 + d1 * t."""
    return 0.5 * d2 * t * t + d1 * t


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of the derivative-based success criterion."""

    holds: bool
    lhs: float  # |d1|
    rhs: float  # 2 * sqrt(sc * |d2|)


def success_criterion(d1: float, d2: float, sc_round_trip: float) -> CriterionVerdict:
    """Sufficient condition |d1| > 2 sqrt(sc |d2|) for correct switching.

    When it holds (strictly), the bounding parabola through (d1, d2) rises
    monotonically by more than 2 sc before it can turn over, so the policy
    switches at most once and onto the cheaper implementation.  At equality
    the parabola's vertex sits exactly at height 2 sc and the criterion does
    not hold.  A vanishing d2 makes the right side zero: any nonzero slope
    qualifies.
    """
    _require_positive(sc_round_trip, "sc_round_trip")
    lhs = abs(d1)
    rhs = 2.0 * math.sqrt(sc_round_trip * abs(d2))
    return CriterionVerdict(holds=lhs > rhs, lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class DerivativeEstimate:
    """First/second derivative of a delta curve at t0, from a local fit."""

    d1: float  # cost units / second
    d2: float  # cost units / second^2
    t0: float
    window: float
    n_samples: int
    method: str = "quadratic-fit"


def estimate_derivatives(
    series: Sequence[tuple[float, float]],
    t0: float,
    window: float,
) -> DerivativeEstimate:
    """Least-squares quadratic fit around t0 on samples of (t, delta).

    Fits a + b t' + c t'^2 on centered time t' = t - t0 over the samples
    inside [t0 - window/2, t0 + window/2] and reports d1 = b, d2 = 2c.
    A quadratic fit is used instead of finite differences for robustness to
    noisy measured curves; the window is the caller's accuracy/noise
    trade-off.  Requires at least 5 samples in the window.
    """
    _require_positive(window, "window")
    pts = np.asarray(list(series), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("series must be a sequence of (t, delta) pairs")
    half = 0.5 * window
    mask = (pts[:, 0] >= t0 - half) & (pts[:, 0] <= t0 + half)
    inside = pts[mask]
    if len(inside) < 5:
        raise ValueError(
            f"need at least 5 samples in the window, got {len(inside)}"
        )
    t_centered = inside[:, 0] - t0
    coeffs = np.polyfit(t_centered, inside[:, 1], deg=2)
    return DerivativeEstimate(
        d1=float(coeffs[1]),
        d2=2.0 * float(coeffs[0]),
        t0=t0,
        window=window,
        n_samples=int(len(inside)),
    )


def double_amplitude(formula: DeltaCurve, period: float) -> float:
    """Max minus min of a periodic delta curve over one period.

    Dense sampling (>= 2^14 points) locates the extremes, then a bounded
    scalar minimization refines each to about 1e-10.  Non-periodic curves
    (model curves with n_clients != 2, the published 10-client curve) are
    rejected, as is a period the curve does not actually repeat over.
    """
    from scipy.optimize import minimize_scalar

    _require_positive(period, "period")
    if not formula.periodic:
        raise ValueError(
            "double amplitude is defined only for periodic curves; "
            f"{formula} drifts"
        )
    scale = max(1.0, formula.W / formula.omega)
    for probe in (0.0, 0.37 * period):
        if abs(formula.at(probe) - formula.at(probe + period)) > 1e-9 * scale:
            raise ValueError(f"curve does not repeat over period {period}")

    n = 2**14 + 1
    t = np.linspace(0.0, period, n)
    values = formula.at(t)
    h = period / (n - 1)

    def refine(idx: int, sense: float) -> float:
        lo = max(0.0, t[idx] - 2 * h)
        hi = min(period, t[idx] + 2 * h)
        res = minimize_scalar(
            lambda x: sense * formula.at(x),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        return sense * res.fun

    best_max = max(float(np.max(values)), refine(int(np.argmax(values)), -1.0))
    best_min = min(float(np.min(values)), refine(int(np.argmin(values)), 1.0))
    return best_max - best_min


def per_cycle_recovery(n_clients: int, W: float, omega: float) -> tuple[float, float]:
    """Largest per-period recovery of the model delta, per active slot.

    Returns (rise, fall): the total rise of delta(t) over one period (the
    most the policy can recover per cycle while nonsub is active) and the
    total fall (same for sub active).  The policy can only trigger within a
    cycle when the relevant value reaches its round-trip threshold.  Closed
    form from the derivative W/2 * ((2 - N) - (N + 2) cos(omega t)).
    """
    if n_clients < 1:
        raise ValueError(f"n_clients must be >= 1, got {n_clients}")
    _require_positive(W, "W")
    _require_positive(omega, "omega")
    n = n_clients
    c_star = (2.0 - n) / (2.0 + n)  # derivative sign flips where cos = c_star
    a = math.acos(c_star)
    rise = 0.5 * W / omega * ((2.0 - n) * (2.0 * math.pi - 2.0 * a) + (n + 2.0) * 2.0 * math.sin(a))
    net = 0.5 * W / omega * (2.0 - n) * 2.0 * math.pi  # integral over a full period
    fall = rise - net
    return rise, fall
