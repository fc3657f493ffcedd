"""Request-rate workloads and their discretization into per-tick masses.

A workload assigns read/write intensities (requests per second) to every
instant of its domain.  The discretizer integrates those intensities over
ticks of width dt, producing request *masses* per tick.  For the closed-form
workloads the integrals are exact antiderivatives, not quadrature, so any
comparison against analytic results is limited only by the tick granularity.

Supported workload variants:

  * Sinusoidal(W, omega): n_r = W/2 * (1 - cos(omega t)),
    n_w = W/2 * (1 + cos(omega t)).  Reads and writes trade off over a cycle
    with constant total rate W.  Phase is fixed at zero.
  * Constant(n_r, n_w)
  * Piecewise(breakpoints): linear interpolation between (t, n_r, n_w)
    breakpoints; trapezoid integration is exact for it.
  * Trace(samples): pre-discretized ticks, e.g. loaded from CSV.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

__all__ = [
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
]

_TRACE_HEADER = ["t", "dt", "reads", "writes"]


@dataclass(frozen=True)
class TickSample:
    """Request mass (integrated intensity) over the tick [t, t + dt]."""

    t: float
    dt: float
    read_mass: float
    write_mass: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise ValueError(f"tick dt must be > 0, got {self.dt!r}")
        for name in ("read_mass", "write_mass"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def end(self) -> float:
        return self.t + self.dt


@dataclass(frozen=True)
class Sinusoidal:
    W: float  # peak request rate, requests/second
    omega: float  # angular frequency, radians/second

    def __post_init__(self) -> None:
        for name in ("W", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class Constant:
    n_r: float
    n_w: float

    def __post_init__(self) -> None:
        for name in ("n_r", "n_w"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class Piecewise:
    """Piecewise-linear intensities through sorted (t, n_r, n_w) breakpoints."""

    breakpoints: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) < 2:
            raise ValueError("piecewise workload needs at least 2 breakpoints")
        prev_t = None
        for i, (t, n_r, n_w) in enumerate(self.breakpoints):
            if prev_t is not None and t <= prev_t:
                raise ValueError(f"breakpoint {i}: times must be strictly increasing")
            if n_r < 0.0 or n_w < 0.0 or not (math.isfinite(n_r) and math.isfinite(n_w)):
                raise ValueError(f"breakpoint {i}: intensities must be finite and >= 0")
            prev_t = t


@dataclass(frozen=True)
class Trace:
    """Pre-discretized workload: an ordered, gap-free run of ticks."""

    samples: tuple[TickSample, ...]

    def __post_init__(self) -> None:
        if not self.samples:
            raise ValueError("trace workload has no samples")
        for i in range(1, len(self.samples)):
            prev, cur = self.samples[i - 1], self.samples[i]
            if abs(cur.t - prev.end) > 1e-9 * max(1.0, abs(prev.end)):
                raise ValueError(f"trace samples not contiguous at index {i}")


IntensitySpec = Union[Sinusoidal, Constant, Piecewise, Trace]


class DiscretizeMode(Enum):
    # Real-valued masses per tick (the continuum view; the default).
    FRACTIONAL_MASS = "fractional"
    # Integer request counts carrying the rounding remainder forward, so the
    # per-kind running totals stay within one request of the exact integrals.
    INTEGER_LARGEST_REMAINDER = "integer"


def intensities_at(spec: IntensitySpec, t: float) -> tuple[float, float]:
    """Exact (n_r, n_w) at time t; rejects t outside the workload's domain."""
    if isinstance(spec, Sinusoidal):
        c = math.cos(spec.omega * t)
        return 0.5 * spec.W * (1.0 - c), 0.5 * spec.W * (1.0 + c)
    if isinstance(spec, Constant):
        return spec.n_r, spec.n_w
    if isinstance(spec, Piecewise):
        times = [b[0] for b in spec.breakpoints]
        if t < times[0] or t > times[-1]:
            raise ValueError(f"t={t} outside piecewise domain [{times[0]}, {times[-1]}]")
        i = bisect.bisect_right(times, t)
        if i == len(times):
            last = spec.breakpoints[-1]
            return last[1], last[2]
        t0, r0, w0 = spec.breakpoints[i - 1]
        t1, r1, w1 = spec.breakpoints[i]
        frac = (t - t0) / (t1 - t0)
        return r0 + frac * (r1 - r0), w0 + frac * (w1 - w0)
    if isinstance(spec, Trace):
        starts = [s.t for s in spec.samples]
        i = bisect.bisect_right(starts, t) - 1
        if i < 0 or t >= spec.samples[i].end:
            raise ValueError(f"t={t} outside trace domain")
        s = spec.samples[i]
        return s.read_mass / s.dt, s.write_mass / s.dt
    raise TypeError(f"unknown workload spec {type(spec).__name__}")


def _masses(spec: IntensitySpec, a: float, b: float) -> tuple[float, float]:
    """Exact integral of (n_r, n_w) over [a, b]."""
    if isinstance(spec, Sinusoidal):
        # antiderivative of n_r is W/2 * (t - sin(omega t)/omega)
        s = (math.sin(spec.omega * b) - math.sin(spec.omega * a)) / spec.omega
        read = 0.5 * spec.W * ((b - a) - s)
        write = 0.5 * spec.W * ((b - a) + s)
        return max(read, 0.0), max(write, 0.0)
    if isinstance(spec, Constant):
        return spec.n_r * (b - a), spec.n_w * (b - a)
    if isinstance(spec, Piecewise):
        times = [bp[0] for bp in spec.breakpoints]
        if a < times[0] - 1e-12 or b > times[-1] + 1e-12:
            raise ValueError(
                f"tick [{a}, {b}] outside piecewise domain [{times[0]}, {times[-1]}]"
            )
        # split at interior breakpoints; trapezoid is exact on each linear piece
        cuts = [a] + [t for t in times if a < t < b] + [b]
        read = write = 0.0
        for lo, hi in zip(cuts, cuts[1:]):
            r_lo, w_lo = intensities_at(spec, lo)
            r_hi, w_hi = intensities_at(spec, hi)
            read += 0.5 * (r_lo + r_hi) * (hi - lo)
            write += 0.5 * (w_lo + w_hi) * (hi - lo)
        return read, write
    raise TypeError(f"cannot integrate workload spec {type(spec).__name__}")


def discretize(
    spec: IntensitySpec,
    t0: float,
    horizon: float,
    dt: float,
    mode: DiscretizeMode = DiscretizeMode.FRACTIONAL_MASS,
) -> list[TickSample]:
    """Split [t0, t0 + horizon] into ticks of width dt with exact masses.

    The final tick is truncated if dt does not divide the horizon.  A Trace
    workload is passed through on its own grid (dt and mode are ignored); the
    requested window must line up with the trace's ticks.
    """
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be finite and > 0, got {dt!r}")
    if not math.isfinite(horizon) or horizon <= 0.0:
        raise ValueError(f"horizon must be finite and > 0, got {horizon!r}")

    if isinstance(spec, Trace):
        return _slice_trace(spec, t0, horizon)

    if isinstance(spec, Sinusoidal) and dt > spec.period / 100.0:
        warnings.warn(
            f"dt={dt} is coarser than 1% of the workload period {spec.period}; "
            "switch times will be correspondingly grainy",
            RuntimeWarning,
            stacklevel=2,
        )

    t_end = t0 + horizon
    n = max(1, math.ceil(horizon / dt - 1e-12))
    ticks: list[TickSample] = []
    carry_r = carry_w = 0.0  # exact cumulative masses (integer mode)
    emitted_r = emitted_w = 0
    for i in range(n):
        a = t0 + i * dt
        b = t_end if i == n - 1 else t0 + (i + 1) * dt
        read, write = _masses(spec, a, b)
        if mode is DiscretizeMode.INTEGER_LARGEST_REMAINDER:
            carry_r += read
            carry_w += write
            next_r = math.floor(carry_r + 0.5)
            next_w = math.floor(carry_w + 0.5)
            read = float(next_r - emitted_r)
            write = float(next_w - emitted_w)
            emitted_r, emitted_w = next_r, next_w
        ticks.append(TickSample(t=a, dt=b - a, read_mass=read, write_mass=write))
    return ticks


def _slice_trace(spec: Trace, t0: float, horizon: float) -> list[TickSample]:
    tol = 1e-9 * max(1.0, abs(t0) + abs(horizon))
    t_end = t0 + horizon
    selected = [s for s in spec.samples if s.t >= t0 - tol and s.end <= t_end + tol]
    if not selected:
        raise ValueError("requested window does not overlap the trace")
    if abs(selected[0].t - t0) > tol or abs(selected[-1].end - t_end) > tol:
        raise ValueError(
            f"window [{t0}, {t_end}] does not line up with the trace grid "
            f"[{selected[0].t}, {selected[-1].end}]"
        )
    return list(selected)


def load_trace(source) -> Trace:
    """Parse a trace workload from CSV.

    Format: UTF-8, header ``t,dt,reads,writes``, decimal points, rows sorted
    by t with no gaps, constant dt.  ``source`` may be a path, a CSV string,
    bytes, or a file-like object.  Row numbers in errors count data rows,
    header excluded.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("no samples: empty trace file") from None
    if [h.strip() for h in header] != _TRACE_HEADER:
        raise ValueError(
            f"bad trace header {header!r}, expected {','.join(_TRACE_HEADER)}"
        )

    samples: list[TickSample] = []
    dt0 = None
    for row_no, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise ValueError(f"row {row_no}: expected 4 fields, got {len(row)}")
        try:
            t, dt, reads, writes = (float(cell) for cell in row)
        except ValueError:
            raise ValueError(f"row {row_no}: malformed number in {row!r}") from None
        if not math.isfinite(dt) or dt <= 0.0:
            raise ValueError(f"row {row_no}: dt must be > 0, got {dt}")
        if reads < 0.0 or writes < 0.0:
            raise ValueError(f"row {row_no}: negative request mass")
        if dt0 is None:
            dt0 = dt
        elif abs(dt - dt0) > 1e-12 * dt0:
            raise ValueError(f"row {row_no}: dt {dt} differs from first dt {dt0}")
        if samples:
            expected = samples[-1].end
            if t < samples[-1].t:
                raise ValueError(f"row {row_no}: times not sorted")
            if abs(t - expected) > 1e-9 * max(1.0, abs(expected)):
                raise ValueError(
                    f"row {row_no}: gap in trace (t={t}, expected {expected})"
                )
        samples.append(TickSample(t=t, dt=dt, read_mass=reads, write_mass=writes))
    if not samples:
        raise ValueError("no samples: trace has a header but no data rows")
    return Trace(samples=tuple(samples))


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str):
        # a path if it points at an existing file, else CSV content
        if "\n" not in source and Path(source).exists():
            return Path(source).read_text(encoding="utf-8")
        return source
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    raise TypeError(f"cannot read trace from {type(source).__name__}")
