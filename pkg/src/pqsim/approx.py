"""Relaxed point-queue models: smooth approximations with relaxation time eps.

The exact point-queue updates switch instantaneously when the queue hits
empty or full.  Replacing the switching terms with linear relaxations at
rate 1/eps yields differentiable dynamics.  Demand and supply rates
[veh/hr] become

    variant      demand rate              supply rate
    eps-PQM1     delta + lam/eps          sigma + (capacity - lam)/eps
    eps-PQM2     lam/eps                  (capacity - lam)/eps
    eps-PQM3     delta + lam/eps          (capacity - lam)/eps
    eps-PQM4     lam/eps                  sigma + (capacity - lam)/eps

and the forward-Euler step is

    lam' = lam + min(delta*dt, s*dt) - min(d*dt, sigma*dt).

With dt = eps the step volumes coincide exactly with the exact discrete
models, so the relaxed family contains the exact one.  Admissibility:
eps-PQM1/2 preserve [0, capacity] for any eps; eps-PQM3 needs
eps <= capacity / max sigma and eps-PQM4 needs eps <= capacity / max
delta; the discrete schemes additionally need dt <= eps.

With unbounded storage, eps-PQM1/eps-PQM3 collapse to the relaxed
bottleneck ("alpha model", alpha = 1/eps)

    lam' = lam + dt * max(delta - sigma, -lam/eps)

and eps-PQM2/eps-PQM4 collapse to the relaxed service model ("eps model")

    lam' = lam + dt * (delta - min(sigma, lam/eps)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .point_queue import Formulation, PqModel, PqState, PqVariant
from .point_queue import _advance as point_queue_advance

__all__ = [
    "EpsilonConfig",
    "eps_demand_supply",
    "eps_admissible_bound",
    "step_eps",
    "alpha_model_step",
    "eps_model_step",
]


@dataclass(frozen=True)
class EpsilonConfig:
    """Relaxation time and step size for the relaxed models.

    Requires eps > 0 and dt <= eps; capacity-dependent admissibility is
    checked at scenario validation where the rate bounds are known.
    ``unsafe=True`` skips the dt <= eps check so inadmissible steps can be
    demonstrated deliberately.
    """

    epsilon: float
    dt: float
    unsafe: bool = False

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive (got {self.epsilon})")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive (got {self.dt})")
        if self.dt > self.epsilon and not self.unsafe:
            raise ValueError(
                f"relaxed discrete models require dt <= epsilon (got dt={self.dt}, epsilon={self.epsilon})"
            )


def eps_admissible_bound(
    variant: PqVariant | PqModel,
    delta_max: float,
    sigma_max: float,
    capacity: float | None,
) -> float:
    """Largest admissible relaxation time eps for a variant.

    Mirrors the exact models' step-size bounds: eps-PQM1/2 admit any eps,
    eps-PQM3 is limited by the service rate, eps-PQM4 by the feed rate.
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


def eps_demand_supply(variant: PqVariant | PqModel, lam, delta, sigma, eps, capacity):
    """Relaxed demand and supply rates (d, s) [veh/hr].

    Unbounded storage gives an infinite supply rate.
    """
    model = variant.model if isinstance(variant, PqVariant) else variant
    if lam < 0 or (capacity is not None and lam > capacity):
        raise ValueError(f"queue length {lam} outside [0, {capacity}]")
    demand = delta + lam / eps if model.demand_includes_feed else lam / eps
    if capacity is None:
        return demand, math.inf
    relax = (capacity - lam) / eps
    supply = sigma + relax if model.supply_includes_service else relax
    return demand, supply


def _eps_advance(model: PqModel, lam, feed, service, capacity, ratio, clamp: bool):
    """One relaxed update; ``ratio`` is dt/eps (exactly 1 collapses to the exact model)."""
    if ratio == 1:
        # dt = eps reproduces the exact discrete model, volumes and all.
        return point_queue_advance(model, lam, feed, service, capacity, clamp)
    relax_out = lam * ratio
    dvol = feed + relax_out if model.demand_includes_feed else relax_out
    if capacity is None:
        svol = None
    else:
        relax_in = (capacity - lam) * ratio
        svol = service + relax_in if model.supply_includes_service else relax_in
    inflow = feed if svol is None else min(feed, svol)
    outflow = min(dvol, service)
    lam_next = lam + (inflow - outflow)
    if clamp:
        lam_next = max(lam_next, 0)
        if capacity is not None:
            lam_next = min(lam_next, capacity)
    return lam_next, inflow, outflow


def _step_with_volumes(variant, state, delta, sigma, cfg, capacity, clamp):
    lam = state.queue if variant.formulation is Formulation.QUEUE else state.arrivals - state.departures
    ratio = cfg.dt / cfg.epsilon
    lam_next, inflow, outflow = _eps_advance(
        variant.model, lam, delta * cfg.dt, sigma * cfg.dt, capacity, ratio, clamp
    )
    arrivals = state.arrivals + inflow
    departures = state.departures + outflow
    if variant.formulation is Formulation.CUMULATIVE:
        lam_next = arrivals - departures
    nxt = PqState(clock=state.clock + cfg.dt, queue=lam_next, arrivals=arrivals, departures=departures)
    return nxt, inflow, outflow


def step_eps(
    variant: PqVariant,
    state: PqState,
    delta,
    sigma,
    cfg: EpsilonConfig,
    capacity,
    clamp: bool = True,
) -> PqState:
    """Advance a relaxed point queue by one step of size cfg.dt."""
    return _step_with_volumes(variant, state, delta, sigma, cfg, capacity, clamp)[0]


def alpha_model_step(lam, delta, sigma, eps, dt):
    """Relaxed bottleneck update lam + dt * max(delta - sigma, -lam/eps).

    Identical to :func:`step_eps` for eps-PQM1/eps-PQM3 with unbounded
    storage.
    """
    if lam < 0:
        raise ValueError(f"queue length must be nonnegative (got {lam})")
    lam_next, _, _ = _eps_advance(PqModel.PQM1, lam, delta * dt, sigma * dt, None, dt / eps, clamp=True)
    return lam_next


def eps_model_step(lam, delta, sigma, eps, dt):
    """Relaxed service update lam + dt * (delta - min(sigma, lam/eps)).

    Identical to :func:`step_eps` for eps-PQM2/eps-PQM4 with unbounded
    storage.
    """
    if lam < 0:
        raise ValueError(f"queue length must be nonnegative (got {lam})")
    lam_next, _, _ = _eps_advance(PqModel.PQM2, lam, delta * dt, sigma * dt, None, dt / eps, clamp=True)
    return lam_next
