"""Elementary cost constants and switching costs for the pub/sub component.

The component has two implementations of the same read/write service:

  * nonsub mode: every read and write goes straight to the server database.
  * sub mode: each client keeps a local image of the database; reads hit the
    local image for free, a write updates the server and fans a notification
    out to the other ``n_clients - 1`` clients.

Per-request costs (abstract units, think round trips):

  * c_nw = 1       write in nonsub mode
  * c_nr = 2       read in nonsub mode (request plus response)
  * c_sw = 2 + (n_clients - 1)   write in sub mode (update plus fan-out)
  * c_sr = 0       read in sub mode (local image)

All functions here are stateless and safe to call from any thread.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

from .policy import SwitchCosts

__all__ = [
    "PubSubCosts",
    "CoverageSpec",
    "SwitchCosts",
    "elementary_costs",
    "cost_rates",
    "switching_cost_coverage",
    "switching_cost_trace",
    "coverage_for_switching_cost",
]


@dataclass(frozen=True)
class PubSubCosts:
    """The four elementary request costs for a system of n_clients clients."""

    n_clients: int
    c_nw: float = 1.0
    c_nr: float = 2.0
    c_sw: float = 0.0  # set by elementary_costs
    c_sr: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.n_clients, int) or isinstance(self.n_clients, bool):
            raise ValueError(f"n_clients must be an integer, got {self.n_clients!r}")
        if self.n_clients < 1:
            raise ValueError(f"n_clients must be >= 1, got {self.n_clients}")
        for name in ("c_nw", "c_nr", "c_sw", "c_sr"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if self.c_sw != 2.0 + (self.n_clients - 1):
            raise ValueError(
                f"c_sw must equal 2 + (n_clients - 1) = {self.n_clients + 1}, "
                f"got {self.c_sw}"
            )


@dataclass(frozen=True)
class CoverageSpec:
    """How many times one period's worth of reads covers the whole database.

    The wording "part of the database covered per period" is ambiguous; this
    artifact fixes the reading that makes the coverage-based switching cost
    equal (per-period read cost) / lam, so that lam = pi/2 with two clients
    yields a switching cost exactly equal to the cost-difference curve's
    peak-to-trough range.
    """

    lam: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam) or self.lam <= 0.0:
            raise ValueError(f"coverage lam must be finite and > 0, got {self.lam!r}")


def elementary_costs(n_clients: int) -> PubSubCosts:
    """The four cost constants for a server with ``n_clients`` clients."""
    if not isinstance(n_clients, int) or isinstance(n_clients, bool):
        raise ValueError(f"n_clients must be an integer, got {n_clients!r}")
    if n_clients < 1:
        raise ValueError(f"n_clients must be >= 1, got {n_clients}")
    return PubSubCosts(n_clients=n_clients, c_sw=2.0 + (n_clients - 1))


def cost_rates(costs: PubSubCosts, n_r: float, n_w: float) -> tuple[float, float]:
    """Instantaneous cost rates (i_n, i_s) of the two modes.

    Bilinear in the request rates, so the same formula also turns per-tick
    request masses into per-tick costs:

        i_n = c_nr * n_r + c_nw * n_w
        i_s = c_sr * n_r + c_sw * n_w
    """
    for name, value in (("n_r", n_r), ("n_w", n_w)):
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    i_n = costs.c_nr * n_r + costs.c_nw * n_w
    i_s = costs.c_sr * n_r + costs.c_sw * n_w
    return i_n, i_s


def switching_cost_coverage(W: float, omega: float, coverage: CoverageSpec) -> float:
    """Switching cost of building the local image, from read coverage.

    Entering sub mode means reading the entire database once.  Over one
    period 2*pi/omega of the sinusoidal workload the reads cost
    c_nr * integral(n_r) = 2*pi*W/omega; if that traffic covers the database
    ``coverage.lam`` times, one full cover costs

        2*pi*W / (omega * lam)
    """
    for name, value in (("W", W), ("omega", omega)):
        if not math.isfinite(value) or value <= 0.0:
            raise ValueError(f"{name} must be finite and > 0, got {value!r}")
    return 2.0 * math.pi * W / (omega * coverage.lam)


def coverage_for_switching_cost(sc: float, W: float, omega: float) -> float:
    """Inverse of switching_cost_coverage: the lam that yields a given sc."""
    for name, value in (("sc", sc), ("W", W), ("omega", omega)):
        if not math.isfinite(value) or value <= 0.0:
            raise ValueError(f"{name} must be finite and > 0, got {value!r}")
    return 2.0 * math.pi * W / (omega * sc)


def switching_cost_trace(item_read_costs: Iterable[float]) -> float:
    """Switching cost as the summed cost of reading every database item."""
    items = list(item_read_costs)
    for i, value in enumerate(items):
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(
                f"item_read_costs[{i}] must be finite and >= 0, got {value!r}"
            )
    if not items:
        warnings.warn(
            "empty database: switching cost 0 is degenerate and would make "
            "the policy oscillate",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return math.fsum(items)
