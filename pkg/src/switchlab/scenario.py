"""Experiment scenarios: JSON schema, validation, derived quantities.

A scenario bundles the cost model (client count), the workload, the
switching-cost choice, the starting implementation and the discretization
into one validated value.  Scenario files are JSON with
exactly the field names below; unknown fields are rejected so that typos in
experiment configs fail fast instead of silently using defaults.

Schema (see README for a full example):

    {
      "n_clients": 2,
      "W": 1.0,
      "omega": 1.0,
      "workload": {"type": "sinusoidal"},          # optional, default sinusoidal
      "sc_spec": {"type": "coverage", "lambda": 1.5707963267948966},
                 # or {"type": "explicit", "sc_12": 4.0, "sc_21": 0.0}
      "start_impl": "nonsub",                       # or "sub"
      "t0": 0.0,                                    # optional, default 0
      "horizon": 12.566370614359172,
      "dt": 0.0001,                                 # optional, default period/1e4
      "discretize_mode": "fractional"               # optional, or "integer"
    }

Workload types: "sinusoidal" (uses the top-level W and omega), "constant"
with n_r/n_w, "piecewise" with breakpoints [[t, n_r, n_w], ...], and
"trace" with a path to a trace CSV (resolved against the scenario file).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Union

from .policy import ImplSlot, SwitchCosts
from .pubsub import CoverageSpec, PubSubCosts, elementary_costs, switching_cost_coverage
from .workload import (
    Constant,
    DiscretizeMode,
    IntensitySpec,
    Piecewise,
    Sinusoidal,
    load_trace,
)

__all__ = ["Role", "CoverageSC", "ExplicitSC", "Scenario", "load_scenario"]


class Role(enum.Enum):
    """Pub/sub role of a slot; nonsub maps to FIRST, sub to SECOND."""

    NONSUB = "nonsub"
    SUB = "sub"

    @property
    def slot(self) -> ImplSlot:
        return ImplSlot.FIRST if self is Role.NONSUB else ImplSlot.SECOND


def role_of(slot: ImplSlot) -> Role:
    return Role.NONSUB if slot is ImplSlot.FIRST else Role.SUB


@dataclass(frozen=True)
class CoverageSC:
    lam: float  # serialized as "lambda"


@dataclass(frozen=True)
class ExplicitSC:
    sc_12: float
    sc_21: float


@dataclass(frozen=True)
class Scenario:
    n_clients: int
    W: float
    omega: float
    workload: IntensitySpec
    sc_spec: Union[CoverageSC, ExplicitSC]
    start_impl: Role
    horizon: float
    t0: float = 0.0
    dt: float | None = None
    discretize_mode: DiscretizeMode = DiscretizeMode.FRACTIONAL_MASS

    def __post_init__(self) -> None:
        if not isinstance(self.n_clients, int) or isinstance(self.n_clients, bool):
            raise ValueError(f"n_clients must be an integer, got {self.n_clients!r}")
        if self.n_clients < 1:
            raise ValueError(f"n_clients must be >= 1, got {self.n_clients}")
        for name in ("W", "omega", "horizon"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.t0):
            raise ValueError(f"t0 must be finite, got {self.t0!r}")
        if self.dt is not None and (not math.isfinite(self.dt) or self.dt <= 0.0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        self.switch_costs()  # derived round trip must be > 0

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def effective_dt(self) -> float:
        if self.dt is not None:
            return self.dt
        if isinstance(self.workload, Sinusoidal):
            return self.period / 1e4
        return self.horizon / 1e4

    def elementary(self) -> PubSubCosts:
        return elementary_costs(self.n_clients)

    def switch_costs(self) -> SwitchCosts:
        if isinstance(self.sc_spec, CoverageSC):
            sc_ns = switching_cost_coverage(self.W, self.omega, CoverageSpec(self.sc_spec.lam))
            return SwitchCosts(sc_12=sc_ns, sc_21=0.0)
        return SwitchCosts(sc_12=self.sc_spec.sc_12, sc_21=self.sc_spec.sc_21)

    def start_slot(self) -> ImplSlot:
        return self.start_impl.slot

    def with_param(self, name: str, value: float) -> "Scenario":
        """A copy with one sweepable parameter replaced."""
        if name in ("W", "omega", "horizon", "t0", "dt"):
            scenario = replace(self, **{name: value})
        elif name == "n_clients":
            scenario = replace(self, n_clients=int(value))
        elif name == "lambda":
            if not isinstance(self.sc_spec, CoverageSC):
                raise ValueError("parameter 'lambda' requires a coverage sc_spec")
            scenario = replace(self, sc_spec=CoverageSC(lam=value))
        elif name in ("sc_12", "sc_21"):
            if not isinstance(self.sc_spec, ExplicitSC):
                raise ValueError(f"parameter '{name}' requires an explicit sc_spec")
            scenario = replace(self, sc_spec=replace(self.sc_spec, **{name: value}))
        else:
            raise ValueError(f"unknown sweep parameter '{name}'")
        # sinusoidal workloads follow the top-level W and omega
        if isinstance(scenario.workload, Sinusoidal):
            scenario = replace(
                scenario, workload=Sinusoidal(W=scenario.W, omega=scenario.omega)
            )
        return scenario

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "n_clients": self.n_clients,
            "W": self.W,
            "omega": self.omega,
            "workload": _workload_to_dict(self.workload),
            "sc_spec": (
                {"type": "coverage", "lambda": self.sc_spec.lam}
                if isinstance(self.sc_spec, CoverageSC)
                else {
                    "type": "explicit",
                    "sc_12": self.sc_spec.sc_12,
                    "sc_21": self.sc_spec.sc_21,
                }
            ),
            "start_impl": self.start_impl.value,
            "t0": self.t0,
            "horizon": self.horizon,
            "discretize_mode": self.discretize_mode.value,
        }
        if self.dt is not None:
            d["dt"] = self.dt
        return d


def _workload_to_dict(spec: IntensitySpec) -> dict[str, Any]:
    if isinstance(spec, Sinusoidal):
        return {"type": "sinusoidal"}
    if isinstance(spec, Constant):
        return {"type": "constant", "n_r": spec.n_r, "n_w": spec.n_w}
    if isinstance(spec, Piecewise):
        return {"type": "piecewise", "breakpoints": [list(b) for b in spec.breakpoints]}
    return {"type": "trace", "samples": len(spec.samples)}


class _Fields:
    """Strict dict reader that rejects unknown and missing fields by name."""

    def __init__(self, data: dict[str, Any], context: str):
        if not isinstance(data, dict):
            raise ValueError(f"{context} must be a JSON object, got {type(data).__name__}")
        self._data = dict(data)
        self._context = context

    def take(self, name: str, required: bool = True, default: Any = None) -> Any:
        if name not in self._data:
            if required:
                raise ValueError(f"missing field '{name}' in {self._context}")
            return default
        return self._data.pop(name)

    def finish(self) -> None:
        if self._data:
            unknown = sorted(self._data)
            raise ValueError(
                f"unknown field '{unknown[0]}' in {self._context}"
                + (f" (and {len(unknown) - 1} more)" if len(unknown) > 1 else "")
            )


def _as_number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"field '{field}' must be a number, got {value!r}")
    return float(value)


def _as_int(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"field '{field}' must be an integer, got {value!r}")
    return value


def _parse_workload(
    data: dict[str, Any] | None, W: float, omega: float, base_dir: Path | None
) -> IntensitySpec:
    if data is None:
        return Sinusoidal(W=W, omega=omega)
    fields = _Fields(data, "workload")
    kind = fields.take("type")
    if kind == "sinusoidal":
        fields.finish()
        return Sinusoidal(W=W, omega=omega)
    if kind == "constant":
        n_r = _as_number(fields.take("n_r"), "workload.n_r")
        n_w = _as_number(fields.take("n_w"), "workload.n_w")
        fields.finish()
        return Constant(n_r=n_r, n_w=n_w)
    if kind == "piecewise":
        raw = fields.take("breakpoints")
        fields.finish()
        if not isinstance(raw, list):
            raise ValueError("field 'workload.breakpoints' must be a list")
        breakpoints = []
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 3:
                raise ValueError(
                    f"field 'workload.breakpoints[{i}]' must be [t, n_r, n_w]"
                )
            breakpoints.append(tuple(_as_number(x, f"workload.breakpoints[{i}]") for x in item))
        return Piecewise(breakpoints=tuple(breakpoints))
    if kind == "trace":
        path = fields.take("path")
        fields.finish()
        if not isinstance(path, str):
            raise ValueError("field 'workload.path' must be a string")
        full = Path(path)
        if base_dir is not None and not full.is_absolute():
            full = base_dir / full
        return load_trace(full)
    raise ValueError(f"unknown workload type '{kind}'")


def scenario_from_dict(data: dict[str, Any], base_dir: Path | None = None) -> Scenario:
    fields = _Fields(data, "scenario")
    n_clients = _as_int(fields.take("n_clients"), "n_clients")
    W = _as_number(fields.take("W"), "W")
    omega = _as_number(fields.take("omega"), "omega")
    workload = _parse_workload(fields.take("workload", required=False), W, omega, base_dir)

    sc_fields = _Fields(fields.take("sc_spec"), "sc_spec")
    sc_type = sc_fields.take("type")
    if sc_type == "coverage":
        sc_spec: Union[CoverageSC, ExplicitSC] = CoverageSC(
            lam=_as_number(sc_fields.take("lambda"), "sc_spec.lambda")
        )
    elif sc_type == "explicit":
        sc_spec = ExplicitSC(
            sc_12=_as_number(sc_fields.take("sc_12"), "sc_spec.sc_12"),
            sc_21=_as_number(sc_fields.take("sc_21", required=False, default=0.0), "sc_spec.sc_21"),
        )
    else:
        raise ValueError(f"unknown sc_spec type '{sc_type}'")
    sc_fields.finish()

    start_raw = fields.take("start_impl")
    try:
        start = Role(start_raw)
    except ValueError:
        raise ValueError(
            f"field 'start_impl' must be 'nonsub' or 'sub', got {start_raw!r}"
        ) from None

    horizon = _as_number(fields.take("horizon"), "horizon")
    t0 = _as_number(fields.take("t0", required=False, default=0.0), "t0")
    dt_raw = fields.take("dt", required=False)
    dt = None if dt_raw is None else _as_number(dt_raw, "dt")
    mode_raw = fields.take("discretize_mode", required=False, default="fractional")
    try:
        mode = DiscretizeMode(mode_raw)
    except ValueError:
        raise ValueError(
            f"field 'discretize_mode' must be 'fractional' or 'integer', got {mode_raw!r}"
        ) from None
    fields.finish()

    return Scenario(
        n_clients=n_clients,
        W=W,
        omega=omega,
        workload=workload,
        sc_spec=sc_spec,
        start_impl=start,
        horizon=horizon,
        t0=t0,
        dt=dt,
        discretize_mode=mode,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario JSON file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from None
    return scenario_from_dict(raw, base_dir=path.parent)
