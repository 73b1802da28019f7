"""Scenario files and the runners that execute them.

A scenario is a JSON document with snake_case fields, rates in veh/hr and
times in hours:

    {
      "model": "pqm2",
      "demand": {"type": "sine_floor", "amplitude": 2000, "floor": 1000},
      "supply": {"type": "constant", "rate": 1200},
      "queue": {"capacity": 200, "initial": 0},
      "dt": 0.01,
      "horizon": 2.0
    }

Model names: ``pqm1`` .. ``pqm4`` (exact point queues), ``eps-pqm1`` ..
``eps-pqm4`` (relaxed, need ``epsilon``), ``vickrey`` (unbounded storage),
``ltm``/``lqm`` (link models, need ``link``) and ``tandem`` (needs
``queues``, a list of ``{"capacity": ..., "initial": ..., "model": ...}``
records ordered origin to destination).  Optional fields: ``formulation``
("A" queue-length state, "B" cumulative-flow state), ``epsilon``,
``unsafe`` (run despite violated admissibility bounds), ``output``.

Every run validates the relevant admissibility bound first and reports the
violated bound by name; ``unsafe`` skips only those bound checks, never
structural ones.  Runs are deterministic: identical scenarios produce
byte-identical CSV files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from . import approx, point_queue
from .approx import EpsilonConfig, eps_admissible_bound
from .errors import ScenarioError, ValidationError
from .link_models import LqmSimulation, LtmSimulation
from .links import LinkParams, QueueSpec
from .network import TandemQueue, TandemSpec, TandemState, step_tandem
from .point_queue import Formulation, PqModel, PqState, PqVariant, well_definedness_bound
from .profiles import Profile, profile_from_dict, profile_to_dict
from .trajectory import Trajectory, TrajectoryStats, sup_distance

__all__ = [
    "Scenario",
    "RunReport",
    "load_scenario",
    "scenario_from_dict",
    "simulate_model",
    "run_scenario",
    "compare_models",
    "convergence_table",
]

POINT_MODELS = ("pqm1", "pqm2", "pqm3", "pqm4")
EPS_MODELS = ("eps-pqm1", "eps-pqm2", "eps-pqm3", "eps-pqm4")
LINK_MODELS = ("ltm", "lqm")
MODEL_NAMES = POINT_MODELS + EPS_MODELS + LINK_MODELS + ("vickrey", "tandem")


@dataclass(frozen=True)
class Scenario:
    model: str
    demand: Profile
    supply: Profile
    dt: float
    horizon: float
    queue: QueueSpec | None = None
    link: LinkParams | None = None
    link_initial: float = 0.0
    tandem: TandemSpec | None = None
    epsilon: float | None = None
    formulation: Formulation = Formulation.QUEUE
    unsafe: bool = False
    output: str | None = None
    source: str = "<scenario>"

    def with_overrides(self, **kwargs) -> "Scenario":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


def _field(doc: dict, name: str, kind, source: str, required: bool = True, default=None):
    if name not in doc:
        if required:
            raise ScenarioError(f"{source}: missing required field '{name}'")
        return default
    value = doc[name]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScenarioError(f"{source}: field '{name}' must be a number (got {value!r})")
        return float(value)
    if not isinstance(value, kind):
        raise ScenarioError(f"{source}: field '{name}' must be a {kind.__name__} (got {value!r})")
    return value


def _queue_spec(doc: dict, source: str) -> QueueSpec:
    cap = doc.get("capacity")
    if cap is not None and (not isinstance(cap, (int, float)) or isinstance(cap, bool)):
        raise ScenarioError(f"{source}: 'capacity' must be a number or null (got {cap!r})")
    initial = _field(doc, "initial", float, source, required=False, default=0.0)
    try:
        return QueueSpec(capacity=None if cap is None else float(cap), initial=initial)
    except ValueError as exc:
        raise ScenarioError(f"{source}: {exc}") from None


def _link_params(doc: dict, source: str) -> LinkParams:
    try:
        return LinkParams(
            length=_field(doc, "length", float, source),
            lanes=_field(doc, "lanes", float, source),
            free_flow_speed=_field(doc, "free_flow_speed", float, source),
            wave_speed=_field(doc, "wave_speed", float, source),
            jam_density=_field(doc, "jam_density", float, source),
        )
    except ValueError as exc:
        raise ScenarioError(f"{source}: link: {exc}") from None


def _pq_model(name: str, source: str) -> PqModel:
    key = name.lower().removeprefix("eps-")
    try:
        return PqModel(key)
    except ValueError:
        raise ScenarioError(f"{source}: unknown point-queue model {name!r}") from None


def scenario_from_dict(doc: dict, source: str = "<scenario>") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError(f"{source}: scenario must be a JSON object")
    model = _field(doc, "model", str, source).lower()
    if model not in MODEL_NAMES:
        raise ScenarioError(f"{source}: unknown model {model!r}; valid: {', '.join(MODEL_NAMES)}")
    try:
        demand = profile_from_dict(_field(doc, "demand", dict, source))
    except ValueError as exc:
        raise ScenarioError(f"{source}: demand: {exc}") from None
    try:
        supply = profile_from_dict(_field(doc, "supply", dict, source))
    except ValueError as exc:
        raise ScenarioError(f"{source}: supply: {exc}") from None
    dt = _field(doc, "dt", float, source)
    horizon = _field(doc, "horizon", float, source)
    queue = None
    if "queue" in doc:
        queue = _queue_spec(_field(doc, "queue", dict, source), f"{source}: queue")
    link = None
    link_initial = 0.0
    if "link" in doc:
        link_doc = _field(doc, "link", dict, source)
        link = _link_params(link_doc, source)
        link_initial = _field(link_doc, "initial", float, f"{source}: link", required=False, default=0.0)
    tandem = None
    if "queues" in doc:
        entries = _field(doc, "queues", list, source)
        queues = []
        for i, entry in enumerate(entries):
            where = f"{source}: queues[{i}]"
            if not isinstance(entry, dict):
                raise ScenarioError(f"{where}: must be an object")
            spec = _queue_spec(entry, where)
            member_model = _pq_model(entry.get("model", "pqm1"), where)
            queues.append(TandemQueue(spec=spec, model=member_model))
        if not queues:
            raise ScenarioError(f"{source}: 'queues' must list at least one queue")
        tandem = TandemSpec(tuple(queues))
    formulation_tag = _field(doc, "formulation", str, source, required=False, default="A").upper()
    if formulation_tag not in ("A", "B"):
        raise ScenarioError(f"{source}: formulation must be 'A' or 'B' (got {formulation_tag!r})")
    epsilon = _field(doc, "epsilon", float, source, required=False)
    unsafe = _field(doc, "unsafe", bool, source, required=False, default=False)
    output = _field(doc, "output", str, source, required=False)
    return Scenario(
        model=model,
        demand=demand,
        supply=supply,
        dt=dt,
        horizon=horizon,
        queue=queue,
        link=link,
        link_initial=link_initial,
        tandem=tandem,
        epsilon=epsilon,
        formulation=Formulation(formulation_tag),
        unsafe=unsafe,
        output=output,
        source=source,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc, source=str(path))


def _step_count(scenario: Scenario) -> int:
    if scenario.dt <= 0:
        raise ValidationError(f"{scenario.source}: dt must be positive (got {scenario.dt})")
    if scenario.horizon <= 0:
        raise ValidationError(f"{scenario.source}: horizon must be positive (got {scenario.horizon})")
    n = round(scenario.horizon / scenario.dt)
    if n < 1:
        raise ValidationError(
            f"{scenario.source}: horizon {scenario.horizon} shorter than one step dt={scenario.dt}"
        )
    return n


def _require_queue(scenario: Scenario, model_name: str) -> QueueSpec:
    if scenario.queue is None:
        raise ValidationError(f"{scenario.source}: model {model_name!r} needs a 'queue' section")
    return scenario.queue


def validate_model(scenario: Scenario, model_name: str) -> None:
    """Check the admissibility bound for one model; ``unsafe`` skips bounds only."""
    name = model_name.lower()
    delta_max = scenario.demand.max_rate
    sigma_max = scenario.supply.max_rate
    if name in POINT_MODELS:
        queue = _require_queue(scenario, name)
        if scenario.unsafe:
            return
        model = _pq_model(name, scenario.source)
        bound = well_definedness_bound(model, delta_max, sigma_max, queue.capacity)
        if scenario.dt > bound:
            limiter = "capacity/sigma_max" if model is PqModel.PQM3 else "capacity/delta_max"
            raise ValidationError(
                f"{scenario.source}: {model.label}-D requires dt <= {limiter} = {bound:.4g} hr "
                f"(got dt = {scenario.dt:g})"
            )
    elif name in EPS_MODELS:
        queue = _require_queue(scenario, name)
        if scenario.epsilon is None:
            raise ValidationError(f"{scenario.source}: model {name!r} needs an 'epsilon' field")
        if scenario.unsafe:
            return
        if scenario.epsilon <= 0:
            raise ValidationError(f"{scenario.source}: epsilon must be positive (got {scenario.epsilon})")
        if scenario.dt > scenario.epsilon:
            raise ValidationError(
                f"{scenario.source}: relaxed models require dt <= epsilon = {scenario.epsilon:g} hr "
                f"(got dt = {scenario.dt:g})"
            )
        model = _pq_model(name, scenario.source)
        bound = eps_admissible_bound(model, delta_max, sigma_max, queue.capacity)
        if scenario.epsilon > bound:
            limiter = "capacity/sigma_max" if model is PqModel.PQM3 else "capacity/delta_max"
            raise ValidationError(
                f"{scenario.source}: eps-{model.label} requires epsilon <= {limiter} = {bound:.4g} hr "
                f"(got epsilon = {scenario.epsilon:g})"
            )
    elif name == "vickrey":
        return
    elif name in LINK_MODELS:
        if scenario.link is None:
            raise ValidationError(f"{scenario.source}: model {name!r} needs a 'link' section")
        if scenario.unsafe:
            return
        bound = min(scenario.link.free_flow_time, scenario.link.wave_time)
        if scenario.dt > bound:
            raise ValidationError(
                f"{scenario.source}: {name.upper()} requires dt <= min(T1, T2) = {bound:.4g} hr "
                f"(got dt = {scenario.dt:g})"
            )
    elif name == "tandem":
        if scenario.tandem is None:
            raise ValidationError(f"{scenario.source}: model 'tandem' needs a 'queues' section")
        if scenario.unsafe:
            return
        for i, member in enumerate(scenario.tandem.queues):
            bound = well_definedness_bound(member.model, delta_max, sigma_max, member.spec.capacity)
            if scenario.dt > bound:
                limiter = "capacity/sigma_max" if member.model is PqModel.PQM3 else "capacity/delta_max"
                raise ValidationError(
                    f"{scenario.source}: queues[{i}] ({member.model.label}-D) requires "
                    f"dt <= {limiter} = {bound:.4g} hr (got dt = {scenario.dt:g})"
                )
    else:
        raise ValidationError(f"{scenario.source}: unknown model {model_name!r}")


def _run_point(scenario: Scenario, name: str, exact: bool) -> Trajectory:
    queue = _require_queue(scenario, name)
    relaxed = name in EPS_MODELS
    model = PqModel.PQM1 if name == "vickrey" else _pq_model(name, scenario.source)
    variant = PqVariant(model, scenario.formulation)
    capacity = None if name == "vickrey" else queue.capacity
    n = _step_count(scenario)
    dt = scenario.dt
    clamp = not scenario.unsafe
    conv = Fraction if exact else float
    cap = capacity if capacity is None else conv(capacity)
    state = PqState.initial(conv(queue.initial))
    if relaxed:
        cfg = EpsilonConfig(scenario.epsilon, dt, unsafe=scenario.unsafe)
        stepper = lambda st, d, s: approx._step_with_volumes(variant, st, d, s, cfg, cap, clamp)
    else:
        dt_volume = conv(dt)
        stepper = lambda st, d, s: point_queue._step_with_volumes(variant, st, d, s, dt_volume, cap, clamp)
    times, queues, arrs, deps, fin, fout = [], [], [], [], [], []
    for i in range(n):
        t = i * dt
        times.append(t)
        queues.append(float(state.queue))
        arrs.append(float(state.arrivals))
        deps.append(float(state.departures))
        state, in_vol, out_vol = stepper(state, conv(scenario.demand.rate_at(t)), conv(scenario.supply.rate_at(t)))
        fin.append(float(in_vol) / dt)
        fout.append(float(out_vol) / dt)
    return Trajectory(name, dt, times, queues, arrs, deps, fin, fout)


def _run_link(scenario: Scenario, name: str) -> Trajectory:
    n = _step_count(scenario)
    dt = scenario.dt
    sim_cls = LtmSimulation if name == "ltm" else LqmSimulation
    try:
        sim = sim_cls(scenario.link, scenario.link_initial, dt)
    except ValueError as exc:
        raise ValidationError(f"{scenario.source}: {exc}") from None
    times, queues, arrs, deps, fin, fout = [], [], [], [], [], []
    for i in range(n):
        t = i * dt
        times.append(t)
        queues.append(sim.queue_size if name == "ltm" else sim.vehicles)
        arrs.append(sim.arrivals)
        deps.append(sim.departures)
        in_vol, out_vol = sim.step(scenario.demand.rate_at(t), scenario.supply.rate_at(t))
        fin.append(in_vol / dt)
        fout.append(out_vol / dt)
    return Trajectory(name, dt, times, queues, arrs, deps, fin, fout)


def _run_tandem(scenario: Scenario) -> tuple[list[Trajectory], float]:
    """Run a tandem; returns per-queue trajectories and the worst conservation residual."""
    spec = scenario.tandem
    n = _step_count(scenario)
    dt = scenario.dt
    clamp = not scenario.unsafe
    state = TandemState.initial(spec)
    m = len(spec.queues)
    initial_total = state.total
    times = []
    queues = [[] for _ in range(m)]
    arrs = [[] for _ in range(m)]
    deps = [[] for _ in range(m)]
    fin = [[] for _ in range(m)]
    fout = [[] for _ in range(m)]
    worst_residual = 0.0
    for i in range(n):
        t = i * dt
        times.append(t)
        lams = state.queues
        for k in range(m):
            queues[k].append(lams[k])
            arrs[k].append(state.arrivals[k])
            deps[k].append(state.departures[k])
        residual = abs(
            sum(lams) - (initial_total + (state.arrivals[0] - spec.queues[0].spec.initial) - state.departures[-1])
        )
        worst_residual = max(worst_residual, residual)
        state, fluxes = step_tandem(spec, state, scenario.demand.rate_at(t), scenario.supply.rate_at(t), dt, clamp)
        for k in range(m):
            fin[k].append(fluxes[k] / dt)
            fout[k].append(fluxes[k + 1] / dt)
    trajectories = [
        Trajectory(f"queue{k + 1}", dt, list(times), queues[k], arrs[k], deps[k], fin[k], fout[k])
        for k in range(m)
    ]
    return trajectories, worst_residual


def simulate_model(scenario: Scenario, model_name: str | None = None, exact: bool = False) -> Trajectory:
    """Validate and run one model of a scenario, returning its trajectory.

    ``exact=True`` runs the exact point-queue models on dyadic-rational
    arithmetic (``fractions.Fraction``), under which formulations A and B
    coincide identically; outputs are converted back to floats.
    """
    name = (model_name or scenario.model).lower()
    validate_model(scenario, name)
    if name in POINT_MODELS or name in EPS_MODELS or name == "vickrey":
        if exact and name in EPS_MODELS:
            raise ValidationError("exact arithmetic is supported for the exact point models only")
        if name == "vickrey" and scenario.queue is None:
            scenario = scenario.with_overrides(queue=QueueSpec.unbounded())
        return _run_point(scenario, name, exact)
    if name in LINK_MODELS:
        return _run_link(scenario, name)
    raise ValidationError(f"simulate_model cannot run {name!r}; use run_scenario for tandems")


@dataclass
class RunReport:
    """Everything a run produced: trajectories, stats, distances, files."""

    model: str
    dt: float
    trajectories: dict[str, Trajectory]
    stats: dict[str, TrajectoryStats]
    distances: dict[tuple[str, str], float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    csv_paths: dict[str, Path] = field(default_factory=dict)

    @property
    def max_distance(self) -> float:
        return max(self.distances.values(), default=0.0)

    def summary_lines(self) -> list[str]:
        lines = []
        for label, st in self.stats.items():
            lines.append(f"{label}: {st.describe()}")
        for (a, b), d in self.distances.items():
            lines.append(f"sup |lambda_{a} - lambda_{b}| = {d:.6g} veh")
        for key, value in self.metadata.items():
            lines.append(f"{key}: {value}")
        return lines


def _write_csvs(report: RunReport, out_dir: str | Path | None) -> None:
    if out_dir is None:
        return
    out = Path(out_dir)
    for label, traj in report.trajectories.items():
        report.csv_paths[label] = traj.write_csv(out / f"{label.replace('/', '_')}.csv")


def run_scenario(
    scenario: Scenario | str | Path,
    out_dir: str | Path | None = None,
    models: list[str] | None = None,
    exact: bool = False,
) -> RunReport:
    """Run a scenario (every model in ``models``, or its own), write CSVs.

    Tandem scenarios produce one trajectory per queue plus a conservation
    residual in the report metadata.
    """
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    if out_dir is None and scenario.output is not None:
        out_dir = scenario.output
    if scenario.model == "tandem" and models is None:
        validate_model(scenario, "tandem")
        trajectories, residual = _run_tandem(scenario)
        report = RunReport(
            model="tandem",
            dt=scenario.dt,
            trajectories={t.label: t for t in trajectories},
            stats={t.label: t.stats() for t in trajectories},
            metadata={
                "max_conservation_residual": residual,
                "mixed_variant_tandem": scenario.tandem.mixed_models,
            },
        )
        _write_csvs(report, out_dir)
        return report
    names = [m.lower() for m in (models or [scenario.model])]
    trajectories = {name: simulate_model(scenario, name, exact=exact) for name in names}
    distances = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            distances[(a, b)] = sup_distance(trajectories[a], trajectories[b])
    report = RunReport(
        model=scenario.model,
        dt=scenario.dt,
        trajectories=trajectories,
        stats={name: trajectories[name].stats() for name in names},
        distances=distances,
    )
    _write_csvs(report, out_dir)
    return report


def compare_models(
    scenario: Scenario | str | Path,
    models: list[str],
    dt: float | None = None,
    out_dir: str | Path | None = None,
) -> RunReport:
    """Run several models on one scenario's profiles and compare them."""
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    return run_scenario(scenario.with_overrides(dt=dt), out_dir=out_dir, models=models)


def convergence_table(
    scenario: Scenario | str | Path,
    models: list[str],
    dt_list: list[float],
) -> list[dict]:
    """Max pairwise sup-norm distance between models for each step size."""
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    rows = []
    for dt in dt_list:
        report = run_scenario(scenario.with_overrides(dt=dt), models=models)
        rows.append({"dt": dt, "max_distance": report.max_distance})
    return rows


def scenario_to_dict(scenario: Scenario) -> dict:
    """Serializable form of a scenario (used by reports and tests)."""
    doc: dict = {
        "model": scenario.model,
        "demand": profile_to_dict(scenario.demand),
        "supply": profile_to_dict(scenario.supply),
        "dt": scenario.dt,
        "horizon": scenario.horizon,
    }
    if scenario.queue is not None:
        doc["queue"] = {"capacity": scenario.queue.capacity, "initial": scenario.queue.initial}
    if scenario.link is not None:
        doc["link"] = {
            "length": scenario.link.length,
            "lanes": scenario.link.lanes,
            "free_flow_speed": scenario.link.free_flow_speed,
            "wave_speed": scenario.link.wave_speed,
            "jam_density": scenario.link.jam_density,
            "initial": scenario.link_initial,
        }
    if scenario.tandem is not None:
        doc["queues"] = [
            {"capacity": q.spec.capacity, "initial": q.spec.initial, "model": q.model.value}
            for q in scenario.tandem.queues
        ]
    if scenario.epsilon is not None:
        doc["epsilon"] = scenario.epsilon
    if scenario.formulation is not Formulation.QUEUE:
        doc["formulation"] = scenario.formulation.value
    if scenario.unsafe:
        doc["unsafe"] = True
    if scenario.output is not None:
        doc["output"] = scenario.output
    return doc
