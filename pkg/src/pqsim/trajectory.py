"""Uniform-grid simulation output: time series, summary stats, CSV I/O.

A trajectory holds one row per simulation step, attributed to the step's
start time: the state (queue length, cumulative in/out flows) at the start
of the step and the average fluxes over the step (volume / dt).  CSV
columns are exactly ``t, lambda, F, G, f, g`` with units hr, veh, veh,
veh, veh/hr, veh/hr.  Floats are written with ``repr`` so files are
byte-identical across runs and parse back to the same doubles, which makes
summary statistics exactly recomputable from the file.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

__all__ = ["Trajectory", "TrajectoryStats", "sup_distance", "CSV_COLUMNS"]

CSV_COLUMNS = ("t", "lambda", "F", "G", "f", "g")

# Queue levels at or below this count as "gone" when timing events.
VANISH_EPS = 1e-9


@dataclass(frozen=True)
class TrajectoryStats:
    max_queue: float
    max_queue_time: float | None
    first_positive_time: float | None
    dissipation_start_time: float | None  # last time the maximum is attained
    vanish_time: float | None  # first time at/below VANISH_EPS after the peak
    min_queue_after_peak: float | None

    def describe(self) -> str:
        def fmt(x):
            return "-" if x is None else f"{x:g}"

        return (
            f"max lambda = {self.max_queue:g} veh at t = {fmt(self.max_queue_time)} hr; "
            f"first positive t = {fmt(self.first_positive_time)} hr; "
            f"dissipation starts t = {fmt(self.dissipation_start_time)} hr; "
            f"vanishes t = {fmt(self.vanish_time)} hr; "
            f"min after peak = {fmt(self.min_queue_after_peak)} veh"
        )


@dataclass
class Trajectory:
    """One row per step: state at the step start plus the step's fluxes."""

    label: str
    dt: float
    times: list[float]
    queue: list[float]
    arrivals: list[float]
    departures: list[float]
    inflow_rate: list[float]
    outflow_rate: list[float]

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("queue", "arrivals", "departures", "inflow_rate", "outflow_rate"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} has length {len(getattr(self, name))}, expected {n}")

    def __len__(self) -> int:
        return len(self.times)

    def stats(self) -> TrajectoryStats:
        if not self.times:
            raise ValueError("empty trajectory")
        peak = max(self.queue)
        if peak <= 0:
            return TrajectoryStats(peak, None, None, None, None, None)
        peak_time = self.times[self.queue.index(peak)]
        first_positive = next((t for t, q in zip(self.times, self.queue) if q > 0), None)
        last_peak_idx = max(i for i, q in enumerate(self.queue) if q == peak)
        dissipation = self.times[last_peak_idx]
        vanish = next(
            (t for t, q in zip(self.times[last_peak_idx:], self.queue[last_peak_idx:]) if q <= VANISH_EPS),
            None,
        )
        tail = self.queue[last_peak_idx:]
        return TrajectoryStats(
            max_queue=peak,
            max_queue_time=peak_time,
            first_positive_time=first_positive,
            dissipation_start_time=dissipation,
            vanish_time=vanish,
            min_queue_after_peak=min(tail),
        )

    def queue_at_or_after(self, t0: float) -> list[float]:
        """Queue samples on grid times >= t0."""
        return [q for t, q in zip(self.times, self.queue) if t >= t0]

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in zip(
                self.times, self.queue, self.arrivals, self.departures, self.inflow_rate, self.outflow_rate
            ):
                writer.writerow([repr(x) for x in row])
        return path

    @classmethod
    def from_csv(cls, path: str | Path, label: str | None = None) -> "Trajectory":
        path = Path(path)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader))
            if header != CSV_COLUMNS:
                raise ValueError(f"unexpected CSV header {header!r}, want {CSV_COLUMNS!r}")
            cols: list[list[float]] = [[] for _ in CSV_COLUMNS]
            for row in reader:
                for col, cell in zip(cols, row):
                    col.append(float(cell))
        times = cols[0]
        dt = times[1] - times[0] if len(times) > 1 else 0.0
        return cls(label or path.stem, dt, *cols)


def sup_distance(a: Trajectory, b: Trajectory) -> float:
    """Largest pointwise queue-length gap between two same-grid trajectories."""
    if len(a) != len(b) or a.dt != b.dt:
        raise ValueError(
            f"trajectories are not on the same grid ({len(a)} rows at dt={a.dt} vs {len(b)} at dt={b.dt})"
        )
    return max(abs(x - y) for x, y in zip(a.queue, b.queue))
