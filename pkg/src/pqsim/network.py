"""Point queues in series with demand/supply coupling (spillback).

Queues are chained with the same junction rule as a single queue: the flux
from queue i to queue i+1 is min(demand volume of i, supply volume of
i+1).  The role the origin feed plays for the first queue is played, for
every interior queue, by the demand volume of its upstream neighbour; the
role the destination service plays for the last queue is played, for
every interior queue, by the supply volume of its downstream neighbour.
For two queues with the first unbounded this gives

    d1 = delta*dt + lam1          s1 = unlimited
    d2 = d1 + lam2                s2 = sigma*dt + (cap2 - lam2)
    lam1' = lam1 + delta*dt - min(d1, s2)
    lam2' = lam2 + min(d1, s2) - min(d2, sigma*dt)

so a full downstream queue throttles its supply to the service rate and
the excess backs up into the upstream queue.

All demands and supplies are evaluated from the step-start state, then all
fluxes, then all updates (a Jacobi sweep).  The state carries per-queue
cumulative flows and derives queue lengths from them; since each
inter-queue flux is a single shared value credited to one queue's outflow
and the next queue's inflow, total conservation (sum of contents equals
cumulative origin inflow minus destination outflow) holds to round-off by
construction, without accumulating drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .links import QueueSpec
from .point_queue import PqModel, _advance, _demand_volume, _supply_volume

__all__ = ["TandemQueue", "TandemSpec", "TandemState", "step_tandem"]


@dataclass(frozen=True)
class TandemQueue:
    spec: QueueSpec
    model: PqModel = PqModel.PQM1


@dataclass(frozen=True)
class TandemSpec:
    """Ordered queues from origin to destination."""

    queues: tuple[TandemQueue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "queues", tuple(self.queues))
        if not self.queues:
            raise ValueError("a tandem needs at least one queue")

    @property
    def mixed_models(self) -> bool:
        """True when queues use different update variants (experimental)."""
        return len({q.model for q in self.queues}) > 1


@dataclass
class TandemState:
    """Cumulative inflow/outflow per queue; queue lengths are derived."""

    clock: float
    arrivals: list[float]
    departures: list[float]

    @classmethod
    def initial(cls, spec: TandemSpec, clock: float = 0.0) -> "TandemState":
        contents = [q.spec.initial for q in spec.queues]
        return cls(clock=clock, arrivals=list(contents), departures=[c * 0 for c in contents])

    @property
    def queues(self) -> list[float]:
        return [f - g for f, g in zip(self.arrivals, self.departures)]

    @property
    def total(self) -> float:
        return sum(self.queues)


def step_tandem(
    spec: TandemSpec,
    state: TandemState,
    delta,
    sigma,
    dt,
    clamp: bool = True,
) -> tuple[TandemState, list]:
    """Advance the whole tandem one step; returns (state', fluxes).

    ``fluxes`` has one volume per boundary: origin inflow, each
    inter-queue flux, destination outflow (length = number of queues + 1).
    """
    n = len(spec.queues)
    lams = state.queues
    caps = [q.spec.capacity for q in spec.queues]
    models = [q.model for q in spec.queues]

    # Demand volumes propagate origin-to-destination: each queue's feed is
    # its upstream neighbour's demand volume.
    feeds = [delta * dt]
    for i in range(n - 1):
        feeds.append(_demand_volume(models[i], lams[i], feeds[i]))
    # Supply volumes propagate destination-to-origin: each queue's service
    # is its downstream neighbour's supply volume (None = unlimited).
    backs: list = [None] * n
    backs[n - 1] = sigma * dt
    for i in range(n - 2, -1, -1):
        backs[i] = _supply_volume(models[i + 1], lams[i + 1], backs[i + 1], caps[i + 1])

    arrivals = list(state.arrivals)
    departures = list(state.departures)
    fluxes: list = []
    incoming = None
    for i in range(n):
        _, inflow, outflow = _advance(models[i], lams[i], feeds[i], backs[i], caps[i], clamp)
        if i == 0:
            # Interior inflows reuse the upstream outflow volume verbatim so
            # each boundary is credited with a single shared value.
            incoming = inflow
            fluxes.append(incoming)
        arrivals[i] = arrivals[i] + incoming
        departures[i] = departures[i] + outflow
        fluxes.append(outflow)
        incoming = outflow
    return TandemState(clock=state.clock + dt, arrivals=arrivals, departures=departures), fluxes
