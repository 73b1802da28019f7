"""Deterministic point-queue and link-queue simulation toolkit.

The package covers a family of queueing models built from a single
junction rule (flux = min of upstream demand and downstream supply):

* four exact discrete point-queue variants (PQM1..PQM4) in queue-length
  and cumulative-flow formulations, with the Vickrey bottleneck and the
  dam-process recursion as special cases;
* their relaxed counterparts with relaxation time eps (eps-PQM1..4);
* two link-based models the point queues are the zero-length limits of:
  the delay-based LTM and the delay-free LQM;
* closed-form bottleneck solutions and stationary-state solvers;
* tandems of point queues with spillback;
* a scenario CLI (``pqsim``) that runs all of the above and emits CSV.
"""

from .analytical import (
    StationaryResult,
    VickreySolution,
    queueing_time,
    stationary_eps,
    stationary_exact,
    vickrey_closed_form,
)
from .approx import (
    EpsilonConfig,
    alpha_model_step,
    eps_admissible_bound,
    eps_demand_supply,
    eps_model_step,
    step_eps,
)
from .errors import PqsimError, ScenarioError, ValidationError
from .link_models import LqmSimulation, LtmSimulation, lqm_demand_supply
from .links import LinkParams, QueueSpec, derived_times, triangular_flow
from .network import TandemQueue, TandemSpec, TandemState, step_tandem
from .point_queue import (
    Formulation,
    PqModel,
    PqState,
    PqVariant,
    discrete_demand_supply,
    step_pq,
    step_vickrey,
    well_definedness_bound,
)
from .profiles import (
    Constant,
    CumulativeProfile,
    PiecewiseConstant,
    Profile,
    SineFloor,
    profile_from_dict,
    profile_to_dict,
    sine_floor,
)
from .scenario import (
    RunReport,
    Scenario,
    compare_models,
    convergence_table,
    load_scenario,
    run_scenario,
    scenario_from_dict,
    simulate_model,
)
from .trajectory import Trajectory, TrajectoryStats, sup_distance

__version__ = "0.1.0"

__all__ = [
    "Constant",
    "CumulativeProfile",
    "EpsilonConfig",
    "Formulation",
    "LinkParams",
    "LqmSimulation",
    "LtmSimulation",
    "PiecewiseConstant",
    "PqModel",
    "PqState",
    "PqVariant",
    "PqsimError",
    "Profile",
    "QueueSpec",
    "RunReport",
    "Scenario",
    "ScenarioError",
    "SineFloor",
    "StationaryResult",
    "TandemQueue",
    "TandemSpec",
    "TandemState",
    "Trajectory",
    "TrajectoryStats",
    "ValidationError",
    "VickreySolution",
    "alpha_model_step",
    "compare_models",
    "convergence_table",
    "derived_times",
    "discrete_demand_supply",
    "eps_admissible_bound",
    "eps_demand_supply",
    "eps_model_step",
    "load_scenario",
    "lqm_demand_supply",
    "profile_from_dict",
    "profile_to_dict",
    "queueing_time",
    "run_scenario",
    "scenario_from_dict",
    "simulate_model",
    "sine_floor",
    "stationary_eps",
    "stationary_exact",
    "step_eps",
    "step_pq",
    "step_tandem",
    "step_vickrey",
    "sup_distance",
    "triangular_flow",
    "vickrey_closed_form",
    "well_definedness_bound",
]
