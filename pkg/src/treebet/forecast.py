"""Interval forecasts and finitely-described forecasting systems.

A forecasting system assigns to every situation a closed rational
subinterval of [0, 1] bounding the probability that the next bit is 1.
Three finitely-described kinds are supported: a single stationary interval,
a finite table of per-situation overrides with a default, and a bounded-order
Markov rule keyed on the trailing bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .errors import ConfigError, DomainError
from .tree import bits, require_situation

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class IntervalForecast:
    """A closed rational subinterval of [0, 1]; precise when lo == hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (ZERO <= self.lo <= self.hi <= ONE):
            raise DomainError(f"invalid forecast interval [{self.lo}, {self.hi}]")

    @property
    def precise(self) -> bool:
        return self.lo == self.hi

    def within(self, other: "IntervalForecast") -> bool:
        """True when this interval is contained in ``other``."""
        return other.lo <= self.lo and self.hi <= other.hi


def interval(lo, hi=None) -> IntervalForecast:
    """Convenience constructor accepting anything Fraction accepts."""
    if hi is None:
        hi = lo
    return IntervalForecast(Fraction(lo), Fraction(hi))


@dataclass(frozen=True)
class Stationary:
    """The same interval forecast in every situation."""

    interval: IntervalForecast

    def at(self, s: str) -> IntervalForecast:
        return self.interval

    def intervals(self) -> Iterator[IntervalForecast]:
        yield self.interval


@dataclass(frozen=True)
class Table:
    """A default forecast with finitely many per-situation overrides."""

    default: IntervalForecast
    overrides: Mapping[str, IntervalForecast] = field(default_factory=dict)

    def __post_init__(self):
        for s in self.overrides:
            require_situation(s)

    def at(self, s: str) -> IntervalForecast:
        return self.overrides.get(s, self.default)

    def intervals(self) -> Iterator[IntervalForecast]:
        yield self.default
        yield from self.overrides.values()


@dataclass(frozen=True)
class Markov:
    """A forecast determined by the last ``order`` observed bits.

    Rows must cover every context of length up to ``order``; contexts
    shorter than the order apply near the root where fewer bits exist.
    """

    order: int
    rows: Mapping[str, IntervalForecast]

    def __post_init__(self):
        if self.order < 0:
            raise ConfigError("markov order must be non-negative")
        for n in range(self.order + 1):
            for j in range(1 << n):
                ctx = bits(j, n)
                if ctx not in self.rows:
                    raise ConfigError(f"markov rows incomplete: missing context {ctx or '@'!r}")

    def at(self, s: str) -> IntervalForecast:
        ctx = s[-self.order:] if self.order else ""
        return self.rows[ctx]

    def intervals(self) -> Iterator[IntervalForecast]:
        yield from self.rows.values()


ForecastingSystem = Union[Stationary, Table, Markov]


def is_non_degenerate(fs: ForecastingSystem) -> bool:
    """True when no representable interval pins the next bit ({0} or {1})."""
    return all(i.hi > ZERO and i.lo < ONE for i in fs.intervals())


def is_precise(fs: ForecastingSystem) -> bool:
    return all(i.precise for i in fs.intervals())


def local_scale(forecast: IntervalForecast) -> Fraction:
    """min(1 - lo, hi): the worst one-step shrink factor for non-negative capital."""
    return min(ONE - forecast.lo, forecast.hi)


def cumulative_bound(fs: ForecastingSystem, s: str) -> Fraction:
    """Product over the prefixes of ``s`` of the inverse one-step scale.

    Any non-negative supermartingale with root value 1 stays below this
    bound, which is 1 at the root and doubles per step for a fair coin.
    """
    require_situation(s)
    total = ONE
    for k in range(len(s)):
        scale = local_scale(fs.at(s[:k]))
        if scale == 0:
            raise DomainError(f"degenerate forecast at {s[:k] or '@'!r}")
        total /= scale
    return total


def integer_log_bound(x) -> int:
    """The smallest L >= 1 with 2**L >= x, for rational x >= 1."""
    x = Fraction(x)
    if x < 1:
        raise DomainError(f"integer_log_bound needs x >= 1, got {x}")
    level = 1
    while (1 << level) < x:
        level += 1
    return level


class ForecastCursor:
    """The forecast along a growing path, updated in O(1) per observed bit.

    Streaming workloads walk a single path for millions of steps; this
    avoids materialising the prefix for the three finite system kinds.
    """

    def __init__(self, fs: ForecastingSystem):
        self._fs = fs
        self._depth = 0
        if isinstance(fs, Table):
            self._window: list[str] = []
            self._horizon = max((len(s) for s in fs.overrides), default=-1)
        elif isinstance(fs, Markov):
            self._window = []
            self._horizon = fs.order
        else:
            self._window = []
            self._horizon = -1

    def current(self) -> IntervalForecast:
        fs = self._fs
        if isinstance(fs, Stationary):
            return fs.interval
        if isinstance(fs, Table):
            if self._depth > self._horizon:
                return fs.default
            return fs.overrides.get("".join(self._window), fs.default)
        return fs.rows["".join(self._window)]

    def push(self, bit: str) -> None:
        self._depth += 1
        if self._horizon < 0:
            return
        self._window.append(bit)
        if isinstance(self._fs, Markov) and len(self._window) > self._horizon:
            del self._window[0]
        elif isinstance(self._fs, Table) and self._depth > self._horizon:
            self._window.clear()
