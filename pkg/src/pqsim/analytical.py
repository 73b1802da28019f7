"""Closed-form solutions: Vickrey bottleneck and stationary states.

For an initially empty queue with unbounded storage fed by demand rate
delta(t) and served at supply rate sigma(t), the cumulative flows solve

    F(t) = integral of delta over [0, t]
    G(t) = min over tau in [0, t] of {F(tau) - S(tau)}  +  S(t)

with S the cumulative supply, and the queue length is

    lam(t) = F(t) - S(t) - min over tau in [0, t] of {F(tau) - S(tau)}.

With constant sigma this reduces to the running-max form
lam(t) = max over tau of {F(t) - F(tau) - (t - tau) * sigma}, the waiting
time of a vehicle entering at t is pi(t) = lam(t) / sigma (it satisfies
F(t) = G(t + pi(t))), and at every instant either the queue is empty or
the discharge rate equals sigma ((g - sigma) * pi = 0).

Running minima are evaluated on the output grid: the profiles' cumulative
integrals are exact at grid points, but the minimizer itself is located to
grid resolution, which is the same first-order accuracy as the discrete
recursions this module is checked against.

Stationary states under constant rates (delta, sigma): every exact variant
settles at capacity when delta > sigma, at zero when delta < sigma, and
anywhere in [0, capacity] when delta = sigma, always with flux
min(delta, sigma).  For PQM2/PQM3 (delta > sigma) and PQM2/PQM4
(delta < sigma) the continuous dynamics admit no exact fixed point at a
positive rate; the value reported is the limit of the discrete fixed
points (capacity - sigma*dt -> capacity, delta*dt -> 0) and is flagged
``limit_of_discrete``.  The relaxed models settle at eps-shifted values
(capacity - eps*sigma, eps*delta) that converge linearly in eps to the
exact ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .point_queue import PqModel, PqVariant
from .profiles import Constant, Profile

__all__ = [
    "StationaryResult",
    "VickreySolution",
    "vickrey_closed_form",
    "queueing_time",
    "stationary_exact",
    "stationary_eps",
]


@dataclass(frozen=True)
class StationaryResult:
    """Stationary queue length (a point or an interval) and the through flux."""

    queue_lo: float
    queue_hi: float
    flux: float
    limit_of_discrete: bool = False

    @property
    def is_point(self) -> bool:
        return self.queue_lo == self.queue_hi

    @property
    def queue(self) -> float:
        if not self.is_point:
            raise ValueError(f"stationary state is an interval [{self.queue_lo}, {self.queue_hi}]")
        return self.queue_lo

    def describe(self) -> str:
        if self.is_point:
            note = " (limit of discrete fixed points)" if self.limit_of_discrete else ""
            return f"lambda={self.queue_lo:g} veh, flux={self.flux:g} vph{note}"
        return f"lambda in [{self.queue_lo:g}, {self.queue_hi:g}] veh, flux={self.flux:g} vph"


@dataclass(frozen=True)
class VickreySolution:
    """Closed-form bottleneck solution sampled on a uniform grid."""

    dt: float
    grid: tuple[float, ...]
    arrivals: tuple[float, ...]  # F
    departures: tuple[float, ...]  # G
    queue: tuple[float, ...]  # lam
    waiting: tuple[float, ...] | None  # pi, only when the supply is constant


def vickrey_closed_form(
    demand: Profile,
    supply: Profile,
    dt: float,
    horizon: float,
    initial: float = 0.0,
) -> VickreySolution:
    """Solve the unbounded-storage bottleneck on a uniform grid.

    The closed form holds for an initially empty queue; a nonzero initial
    content is rejected.
    """
    if initial != 0:
        raise ValueError(
            f"the closed-form solution requires an initially empty queue (got initial = {initial})"
        )
    if dt <= 0 or horizon <= 0:
        raise ValueError("dt and horizon must be positive")
    n = round(horizon / dt)
    grid = [i * dt for i in range(n + 1)]
    arrivals = [demand.cumulative(t) for t in grid]
    served = [supply.cumulative(t) for t in grid]
    queue = []
    departures = []
    running_min = 0.0  # F(0) - S(0)
    for f, s in zip(arrivals, served):
        running_min = min(running_min, f - s)
        queue.append(f - s - running_min)
        departures.append(running_min + s)
    waiting = None
    if isinstance(supply, Constant) and supply.rate > 0:
        waiting = tuple(q / supply.rate for q in queue)
    return VickreySolution(
        dt=dt,
        grid=tuple(grid),
        arrivals=tuple(arrivals),
        departures=tuple(departures),
        queue=tuple(queue),
        waiting=waiting,
    )


def queueing_time(lam: float, sigma: float) -> float:
    """Waiting time lam / sigma [hr] under a constant service rate sigma."""
    if lam < 0:
        raise ValueError(f"queue length must be nonnegative (got {lam})")
    if sigma <= 0:
        if lam > 0:
            raise ValueError(f"queueing time is undefined for sigma = {sigma} with a nonempty queue")
        return 0.0
    return lam / sigma


_NO_CONTINUOUS_FULL = (PqModel.PQM2, PqModel.PQM3)  # delta > sigma > 0
_NO_CONTINUOUS_EMPTY = (PqModel.PQM2, PqModel.PQM4)  # 0 < delta < sigma


def stationary_exact(
    delta: float,
    sigma: float,
    capacity: float,
    variant: PqVariant | PqModel | None = None,
) -> StationaryResult:
    """Stationary state of the exact models under constant rates.

    The value is the same for all four variants; pass ``variant`` to learn
    whether it exists as a continuous fixed point or only as the limit of
    the discrete ones (``limit_of_discrete``).
    """
    if capacity is None or capacity <= 0:
        raise ValueError("stationary analysis requires a finite positive capacity")
    if delta < 0 or sigma < 0:
        raise ValueError("rates must be nonnegative")
    model = variant.model if isinstance(variant, PqVariant) else variant
    flux = min(delta, sigma)
    if delta > sigma:
        limit = model in _NO_CONTINUOUS_FULL and sigma > 0
        return StationaryResult(capacity, capacity, flux, limit_of_discrete=limit)
    if delta < sigma:
        limit = model in _NO_CONTINUOUS_EMPTY and delta > 0
        return StationaryResult(0.0, 0.0, flux, limit_of_discrete=limit)
    return StationaryResult(0.0, capacity, flux)


def stationary_eps(
    variant: PqVariant | PqModel,
    delta: float,
    sigma: float,
    capacity: float,
    eps: float,
) -> StationaryResult:
    """Stationary state of a relaxed variant under constant rates."""
    if capacity is None or capacity <= 0:
        raise ValueError("stationary analysis requires a finite positive capacity")
    if delta < 0 or sigma < 0:
        raise ValueError("rates must be nonnegative")
    if eps <= 0:
        raise ValueError(f"epsilon must be positive (got {eps})")
    bound = capacity / max(delta, sigma) if max(delta, sigma) > 0 else None
    if bound is not None and eps > bound:
        raise ValidationError(
            f"epsilon must satisfy eps <= capacity/max(delta, sigma) = {bound:.4g} hr (got {eps:g})"
        )
    model = variant.model if isinstance(variant, PqVariant) else variant
    flux = min(delta, sigma)
    ceiling = capacity - eps * sigma  # relaxed full level
    floor = eps * delta  # relaxed empty level
    if delta > sigma:
        lam = capacity if model.supply_includes_service else ceiling
        return StationaryResult(lam, lam, flux)
    if delta < sigma:
        lam = 0.0 if model.demand_includes_feed else floor
        return StationaryResult(lam, lam, flux)
    lo = 0.0 if model.demand_includes_feed else floor
    hi = capacity if model.supply_includes_service else ceiling
    return StationaryResult(lo, hi, flux)
