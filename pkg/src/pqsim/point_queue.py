"""Discrete point-queue updates: the four model variants and their specials.

A point queue stores ``lam`` vehicles (0 <= lam <= capacity) at a facility
of zero physical extent.  Over one step of size dt it exchanges volumes
with an upstream feed (delta * dt offered) and a downstream service
(sigma * dt accepted):

    inflow  = min(feed_volume, supply_volume)
    outflow = min(demand_volume, service_volume)
    lam'    = lam + inflow - outflow

The four variants differ in whether the feed enters the queue's demand and
whether the service enters its supply:

    variant   demand volume       supply volume
    PQM1      feed + lam          service + (capacity - lam)
    PQM2      lam                 capacity - lam
    PQM3      feed + lam          capacity - lam
    PQM4      lam                 service + (capacity - lam)

Unbounded capacity removes the supply limit entirely (inflow = feed); with
it PQM1/PQM3 collapse to the classical Vickrey bottleneck recursion
``lam' = max(0, lam + feed - service)``.  PQM3 with finite capacity is the
storage/release recursion used for dam processes:
``lam' = min(feed + lam, capacity) - min(feed + lam, service)``.

Step-size admissibility: PQM1 and PQM2 map [0, capacity] into itself for
any dt.  PQM3 needs dt <= capacity / max sigma and PQM4 needs
dt <= capacity / max delta; beyond those bounds a single step can leave
the physical range (see :func:`well_definedness_bound`).

Two formulations of the same update are provided: formulation A carries
the queue length forward; formulation B carries the cumulative inflow F
and outflow G and derives lam = F - G.  They apply identical volume
expressions and coincide exactly in exact arithmetic; every function here
is written with plain arithmetic and min/max only, so it can be run on
``fractions.Fraction`` states for bit-exact checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "PqModel",
    "Formulation",
    "PqVariant",
    "PqState",
    "discrete_demand_supply",
    "step_pq",
    "step_vickrey",
    "well_definedness_bound",
]


class PqModel(Enum):
    PQM1 = "pqm1"
    PQM2 = "pqm2"
    PQM3 = "pqm3"
    PQM4 = "pqm4"

    @property
    def demand_includes_feed(self) -> bool:
        """Demand volume is feed + lam (else lam alone)."""
        return self in (PqModel.PQM1, PqModel.PQM3)

    @property
    def supply_includes_service(self) -> bool:
        """Supply volume is service + free space (else free space alone)."""
        return self in (PqModel.PQM1, PqModel.PQM4)

    @property
    def label(self) -> str:
        return self.name


class Formulation(Enum):
    QUEUE = "A"  # queue length is the state variable
    CUMULATIVE = "B"  # cumulative in/out flows are the state variables


@dataclass(frozen=True)
class PqVariant:
    model: PqModel
    formulation: Formulation = Formulation.QUEUE

    @property
    def label(self) -> str:
        return f"{self.formulation.value}-{self.model.label}"


@dataclass(frozen=True)
class PqState:
    """Point-queue state: queue length plus cumulative in/out flows.

    ``queue`` is authoritative under formulation A; under formulation B it
    is always ``arrivals - departures``.  Conventions: arrivals(0) equals
    the initial content, departures(0) = 0.
    """

    clock: float
    queue: float
    arrivals: float  # F, cumulative inflow [veh]
    departures: float  # G, cumulative outflow [veh]

    @classmethod
    def initial(cls, content, clock=0.0) -> "PqState":
        return cls(clock=clock, queue=content, arrivals=content, departures=content * 0)


def _demand_volume(model: PqModel, lam, feed):
    return feed + lam if model.demand_includes_feed else lam


def _supply_volume(model: PqModel, lam, service, capacity):
    """Supply volume, or None when structurally unlimited.

    ``capacity is None`` (unbounded storage) makes the supply unlimited in
    every variant; an unlimited downstream service (``service is None``)
    does the same for the variants whose supply includes the service term.
    """
    if capacity is None:
        return None
    room = capacity - lam
    if model.supply_includes_service:
        return None if service is None else service + room
    return room


def _advance(model: PqModel, lam, feed, service, capacity, clamp: bool):
    """One queue update; returns (lam_next, inflow, outflow) as volumes.

    ``feed`` and ``service`` are the volumes offered from upstream and
    accepted downstream during the step (service None = unlimited).  The
    drained term resolves lam - outflow algebraically so that a queue
    hitting a floor or ceiling lands on the exact value (0, feed,
    capacity - service, ...) instead of accumulating round-off.
    """
    svol = _supply_volume(model, lam, service, capacity)
    inflow = feed if svol is None else min(feed, svol)
    dvol = _demand_volume(model, lam, feed)
    outflow = dvol if service is None else min(dvol, service)
    if service is None:
        drained = -feed if model.demand_includes_feed else 0
    elif model.demand_includes_feed:
        drained = max(-feed, lam - service)
    else:
        drained = max(0, lam - service)
    lam_next = inflow + drained
    if clamp:
        # Absorbs last-ulp float excursions only: within the admissible
        # step bound the exact update never leaves [0, capacity].
        lam_next = max(lam_next, 0)
        if capacity is not None:
            lam_next = min(lam_next, capacity)
    return lam_next, inflow, outflow


def discrete_demand_supply(variant: PqVariant | PqModel, lam, delta, sigma, dt, capacity):
    """Demand and supply volumes (d*dt, s*dt) [veh] for one step.

    ``delta`` and ``sigma`` are the origin demand and destination supply
    rates [veh/hr]; ``capacity`` of None means unbounded storage, in which
    case the supply volume is infinite.
    """
    model = variant.model if isinstance(variant, PqVariant) else variant
    if lam < 0 or (capacity is not None and lam > capacity):
        raise ValueError(f"queue length {lam} outside [0, {capacity}]")
    dvol = _demand_volume(model, lam, delta * dt)
    svol = _supply_volume(model, lam, sigma * dt, capacity)
    return dvol, math.inf if svol is None else svol


def _step_with_volumes(variant, state, delta, sigma, dt, capacity, clamp):
    lam = state.queue if variant.formulation is Formulation.QUEUE else state.arrivals - state.departures
    lam_next, inflow, outflow = _advance(variant.model, lam, delta * dt, sigma * dt, capacity, clamp)
    arrivals = state.arrivals + inflow
    departures = state.departures + outflow
    if variant.formulation is Formulation.CUMULATIVE:
        lam_next = arrivals - departures
    nxt = PqState(clock=state.clock + dt, queue=lam_next, arrivals=arrivals, departures=departures)
    return nxt, inflow, outflow


def step_pq(
    variant: PqVariant,
    state: PqState,
    delta,
    sigma,
    dt,
    capacity,
    clamp: bool = True,
) -> PqState:
    """Advance a point queue by one step of size dt.

    Formulation A updates the queue length; formulation B updates the
    cumulative flows and rederives the queue length as F - G.  ``clamp``
    keeps the queue inside [0, capacity] against floating-point dust; pass
    ``clamp=False`` to reproduce admissibility failures with out-of-bound
    step sizes.
    """
    return _step_with_volumes(variant, state, delta, sigma, dt, capacity, clamp)[0]


def step_vickrey(lam, delta, sigma, dt):
    """Vickrey bottleneck update: max(0, lam + (delta - sigma) * dt).

    Exactly the unbounded-storage special case of PQM1 and PQM3 (both
    collapse to the same recursion), evaluated through the same code path.
    """
    if lam < 0:
        raise ValueError(f"queue length must be nonnegative (got {lam})")
    lam_next, _, _ = _advance(PqModel.PQM1, lam, delta * dt, sigma * dt, None, clamp=True)
    return lam_next


def well_definedness_bound(
    variant: PqVariant | PqModel,
    delta_max: float,
    sigma_max: float,
    capacity: float | None,
) -> float:
    """Largest dt for which one step maps [0, capacity] into itself.

    PQM1 and PQM2 admit any step size; PQM3 is limited by the service rate
    (capacity / sigma_max), PQM4 by the feed rate (capacity / delta_max).
    Unbounded storage admits any step size in all variants.
    """
    model = variant.model if isinstance(variant, PqVariant) else variant
    if delta_max < 0 or sigma_max < 0:
        raise ValueError("rate bounds must be nonnegative")
    if capacity is None:
        return math.inf
    if model is PqModel.PQM3:
        return math.inf if sigma_max == 0 else capacity / sigma_max
    if model is PqModel.PQM4:
        return math.inf if delta_max == 0 else capacity / delta_max
    return math.inf
