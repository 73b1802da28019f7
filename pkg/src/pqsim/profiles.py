"""Time-varying rate profiles for origin demand and destination supply.

A profile maps clock time t [hr] to a nonnegative rate [veh/hr] and knows
its own exact cumulative integral [veh].  Profiles are closed-form objects
rather than sampled arrays so that step-size refinement studies can
evaluate them on arbitrarily fine grids without re-sampling the input.

Three shapes cover the bundled scenarios:

* ``Constant``: fixed rate.
* ``PiecewiseConstant``: left-closed step function.  The value at a
  breakpoint is the rate of the interval that starts there, which matches
  forward-Euler stepping (rates are sampled at interval starts).
* ``SineFloor``: ``max(amplitude * sin(pi * t), floor)`` -- a single-period
  rush-hour pulse (period 2 hr) that never drops below a base rate.  Its
  integral is evaluated piecewise with analytically computed crossing
  times, so it is exact, not quadrature-based.

All profiles are immutable and safe to share between concurrent runs.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

__all__ = [
    "Profile",
    "Constant",
    "PiecewiseConstant",
    "SineFloor",
    "CumulativeProfile",
    "sine_floor",
    "profile_from_dict",
    "profile_to_dict",
]


def _check_time(t: float) -> None:
    if t < 0:
        raise ValueError(f"rate profiles are defined for t >= 0 only (got t = {t})")


class Profile:
    """Interface shared by all rate profiles."""

    def rate_at(self, t: float) -> float:
        """Instantaneous rate [veh/hr] at time t [hr]."""
        raise NotImplementedError

    def cumulative(self, t: float) -> float:
        """Exact integral of the rate over [0, t] [veh]."""
        raise NotImplementedError

    @property
    def max_rate(self) -> float:
        """Supremum of the rate over t >= 0 [veh/hr]."""
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Profile):
    rate: float

    def __post_init__(self) -> None:
        if self.rate < 0:
            raise ValueError(f"rate must be nonnegative (got {self.rate})")

    def rate_at(self, t: float) -> float:
        _check_time(t)
        return self.rate

    def cumulative(self, t: float) -> float:
        _check_time(t)
        return self.rate * t

    @property
    def max_rate(self) -> float:
        return self.rate


@dataclass(frozen=True)
class PiecewiseConstant(Profile):
    """Step function: ``rates[i]`` applies on ``[breakpoints[i], breakpoints[i+1])``.

    ``breakpoints`` must start at 0 and be strictly increasing; the last
    rate extends to infinity.
    """

    breakpoints: tuple[float, ...]
    rates: tuple[float, ...]

    def __post_init__(self) -> None:
        bp = tuple(float(b) for b in self.breakpoints)
        r = tuple(float(x) for x in self.rates)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "rates", r)
        if len(bp) != len(r) or not bp:
            raise ValueError("breakpoints and rates must have equal, nonzero length")
        if bp[0] != 0.0:
            raise ValueError(f"first breakpoint must be 0 (got {bp[0]})")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(x < 0 for x in r):
            raise ValueError("rates must be nonnegative")
        cum = [0.0]
        for i in range(1, len(bp)):
            cum.append(cum[-1] + r[i - 1] * (bp[i] - bp[i - 1]))
        object.__setattr__(self, "_cum", tuple(cum))

    def rate_at(self, t: float) -> float:
        _check_time(t)
        return self.rates[bisect_right(self.breakpoints, t) - 1]

    def cumulative(self, t: float) -> float:
        _check_time(t)
        i = bisect_right(self.breakpoints, t) - 1
        return self._cum[i] + self.rates[i] * (t - self.breakpoints[i])

    @property
    def max_rate(self) -> float:
        return max(self.rates)


@dataclass(frozen=True)
class SineFloor(Profile):
    """``max(amplitude * sin(pi * t), floor)`` with amplitude > floor >= 0.

    Use :func:`sine_floor` when the inputs may degenerate (amplitude <=
    floor), in which case the profile is a plain :class:`Constant`.
    """

    amplitude: float
    floor: float

    def __post_init__(self) -> None:
        if not self.amplitude > self.floor >= 0:
            raise ValueError(
                "SineFloor requires amplitude > floor >= 0 "
                f"(got amplitude={self.amplitude}, floor={self.floor}); "
                "use sine_floor() to normalize the degenerate case"
            )

    @property
    def crossing_time(self) -> float:
        """First t > 0 where the sinusoid meets the floor [hr]."""
        return math.asin(self.floor / self.amplitude) / math.pi

    def rate_at(self, t: float) -> float:
        _check_time(t)
        return max(self.amplitude * math.sin(math.pi * t), self.floor)

    def cumulative(self, t: float) -> float:
        _check_time(t)
        periods = math.floor(t / 2.0)
        u = t - 2.0 * periods
        return periods * self._period_volume() + self._partial(u)

    def _period_volume(self) -> float:
        tc = self.crossing_time
        return self.floor * (1.0 + 2.0 * tc) + 2.0 * self.amplitude * math.cos(math.pi * tc) / math.pi

    def _partial(self, u: float) -> float:
        # Integral over [0, u] for u in [0, 2): floor on [0, tc] and
        # [1 - tc, 2], sinusoid in between.
        tc = self.crossing_time
        if u <= tc:
            return self.floor * u
        head = self.floor * tc
        c0 = math.cos(math.pi * tc)
        if u <= 1.0 - tc:
            return head + self.amplitude * (c0 - math.cos(math.pi * u)) / math.pi
        return head + 2.0 * self.amplitude * c0 / math.pi + self.floor * (u - (1.0 - tc))

    @property
    def max_rate(self) -> float:
        return self.amplitude


def sine_floor(amplitude: float, floor: float) -> Profile:
    """Build a sine-with-floor profile, normalizing the degenerate case.

    When the sinusoid never exceeds the floor the profile is exactly
    ``Constant(floor)`` and is returned as that variant, so the piecewise
    integral never has to handle an empty sinusoid segment.
    """
    if floor < 0:
        raise ValueError(f"floor must be nonnegative (got {floor})")
    if amplitude <= floor:
        return Constant(floor)
    return SineFloor(amplitude, floor)


@dataclass(frozen=True)
class CumulativeProfile:
    """Exact running volume S(t) of a base rate profile."""

    base: Profile

    def value_at(self, t: float) -> float:
        return self.base.cumulative(t)


def profile_from_dict(spec: dict) -> Profile:
    """Build a profile from its tagged-record form used in scenario files."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError(f"profile must be a tagged record with a 'type' field (got {spec!r})")
    kind = spec["type"]
    try:
        if kind == "constant":
            return Constant(float(spec["rate"]))
        if kind == "piecewise_constant":
            return PiecewiseConstant(tuple(spec["breakpoints"]), tuple(spec["rates"]))
        if kind == "sine_floor":
            return sine_floor(float(spec["amplitude"]), float(spec["floor"]))
    except KeyError as missing:
        raise ValueError(f"profile of type {kind!r} is missing field {missing.args[0]!r}") from None
    raise ValueError(f"unknown profile type {kind!r}")


def profile_to_dict(profile: Profile) -> dict:
    if isinstance(profile, Constant):
        return {"type": "constant", "rate": profile.rate}
    if isinstance(profile, PiecewiseConstant):
        return {
            "type": "piecewise_constant",
            "breakpoints": list(profile.breakpoints),
            "rates": list(profile.rates),
        }
    if isinstance(profile, SineFloor):
        return {"type": "sine_floor", "amplitude": profile.amplitude, "floor": profile.floor}
    raise TypeError(f"cannot serialize profile {profile!r}")
