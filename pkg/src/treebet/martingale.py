"""Tree processes, supermartingale verification, and betting strategies.

A process assigns an exact rational to every situation of the tree up to a
fixed depth.  It is a supermartingale for a forecasting system when its
one-step difference has non-positive local upper expectation everywhere; a
test supermartingale additionally starts at 1 and never goes negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

from .errors import ContractError, DomainError
from .expectation import cut_upper_prob
from .forecast import ForecastingSystem, IntervalForecast
from .local import LocalGamble, upper_expectation
from .tree import ROOT, minimal_antichain, require_situation, situations_up_to

# Query interface standing in for a computable process: q(s, N) must be
# within 2**-N of the target value at s.
ApproximationSchedule = Callable[[str, int], Fraction]

KellyDirection = Literal["on-one", "on-zero"]


class Process:
    """A total rational-valued map on the tree truncated at ``depth``."""

    __slots__ = ("depth", "values")

    def __init__(self, depth: int, values: dict[str, Fraction]):
        if depth < 0:
            raise DomainError("process depth must be non-negative")
        expected = (1 << (depth + 1)) - 1
        if len(values) != expected:
            raise DomainError(f"depth-{depth} process needs {expected} values, got {len(values)}")
        for s in situations_up_to(depth):
            if s not in values:
                raise DomainError(f"process missing value at {s or '@'!r}")
        self.depth = depth
        self.values = values

    @classmethod
    def from_function(cls, depth: int, fn: Callable[[str], Fraction]) -> "Process":
        return cls(depth, {s: Fraction(fn(s)) for s in situations_up_to(depth)})

    def at(self, s: str) -> Fraction:
        require_situation(s)
        if len(s) > self.depth:
            raise DomainError(f"situation {s!r} deeper than process depth {self.depth}")
        return self.values[s]

    @property
    def root(self) -> Fraction:
        return self.values[ROOT]

    def delta(self, s: str) -> LocalGamble:
        """The one-step difference gamble at an interior situation."""
        if len(s) >= self.depth:
            raise DomainError(f"no children below {s!r} at depth {self.depth}")
        here = self.values[s]
        return LocalGamble(on1=self.values[s + "1"] - here, on0=self.values[s + "0"] - here)

    def max_value(self) -> Fraction:
        return max(self.values.values())

    def __neg__(self) -> "Process":
        return Process(self.depth, {s: -v for s, v in self.values.items()})


def check_supermartingale(fs: ForecastingSystem, process: Process) -> list[str]:
    """Every interior situation where the one-step gain has positive upper expectation.

    An empty list certifies the supermartingale property on the truncated tree.
    """
    violations = [
        s
        for s in situations_up_to(process.depth - 1)
        if upper_expectation(fs.at(s), process.delta(s)) > 0
    ] if process.depth > 0 else []
    return sorted(violations, key=lambda s: (len(s), s))


def check_test_supermartingale(fs: ForecastingSystem, process: Process) -> bool:
    """Root value 1, non-negative everywhere, and no supermartingale violations."""
    if process.root != 1:
        return False
    if any(v < 0 for v in process.values.values()):
        return False
    return not check_supermartingale(fs, process)


def capital_along(process: Process, w: str) -> list[Fraction]:
    """The capital at every prefix of ``w``, root included."""
    require_situation(w)
    if len(w) > process.depth:
        raise DomainError(f"path {w!r} longer than process depth {process.depth}")
    return [process.values[w[:n]] for n in range(len(w) + 1)]


@dataclass(frozen=True)
class VilleThreshold:
    cut: frozenset[str]
    bound: Fraction
    actual: Fraction


def ville_threshold(fs: ForecastingSystem, process: Process, threshold) -> VilleThreshold:
    """The first-passage cut over ``threshold`` with its probability bound.

    For a non-negative supermartingale the upper probability of ever
    reaching the threshold is at most root / threshold; ``actual`` is the
    exact upper probability of the cut, so actual <= bound.
    """
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise DomainError("threshold must be positive")
    hits = [s for s in situations_up_to(process.depth) if process.values[s] >= threshold]
    cut = minimal_antichain(hits)
    bound = process.root / threshold
    actual = cut_upper_prob(fs, cut) if cut else Fraction(0)
    return VilleThreshold(cut=cut, bound=bound, actual=actual)


def bound_check(fs: ForecastingSystem, process: Process) -> bool:
    """Verify value(s) <= root * cumulative_bound(s) at every situation."""
    root = process.root
    ceiling: dict[str, Fraction] = {ROOT: Fraction(1)}
    for s in situations_up_to(process.depth):
        if s:
            parent = s[:-1]
            scale = min(1 - fs.at(parent).lo, fs.at(parent).hi)
            if scale == 0:
                raise DomainError(f"degenerate forecast at {parent or '@'!r}")
            ceiling[s] = ceiling[parent] / scale
        if process.values[s] > root * ceiling[s]:
            return False
    return True


def rationalize(q: ApproximationSchedule, fs: ForecastingSystem, depth: int) -> Process:
    """A positive rational test supermartingale tracking a queried target.

    The value at ``s`` is (q(s, |s|) + 3 * 2**-|s|) / 4; when ``q`` honours
    its 2**-N accuracy contract for a test supermartingale target T, the
    result R is itself a test supermartingale with |4R - T| <= 4 * 2**-|s|.
    """
    if q(ROOT, 0) != 1:
        raise ContractError("schedule must report 1 at the root with error budget 0")
    return Process.from_function(
        depth, lambda s: (q(s, len(s)) + 3 * Fraction(1, 1 << len(s))) / 4
    )


def kelly_gamble(forecast: IntervalForecast, direction: KellyDirection) -> LocalGamble:
    """The unit bet on the chosen outcome, normalised to worst-case loss -1.

    Both variants have non-positive local upper expectation, so scaling by
    a stake in [0, 1] yields multiplicative test supermartingales.
    """
    if direction == "on-one":
        if forecast.hi == 0:
            raise DomainError("betting on 1 against a {0} forecast")
        return LocalGamble(on1=(1 - forecast.hi) / forecast.hi, on0=Fraction(-1))
    if direction == "on-zero":
        if forecast.lo == 1:
            raise DomainError("betting on 0 against a {1} forecast")
        return LocalGamble(on1=Fraction(-1), on0=forecast.lo / (1 - forecast.lo))
    raise DomainError(f"unknown direction {direction!r}")


def kelly_process(
    fs: ForecastingSystem, stake, direction: KellyDirection, depth: int
) -> Process:
    """Multiplicative capital process betting a fixed fraction each step."""
    stake = Fraction(stake)
    if not (0 <= stake <= 1):
        raise DomainError("stake must lie in [0, 1]")
    values: dict[str, Fraction] = {ROOT: Fraction(1)}
    for s in situations_up_to(depth):
        if s:
            parent = s[:-1]
            g = kelly_gamble(fs.at(parent), direction)
            gain = g.on1 if s[-1] == "1" else g.on0
            values[s] = values[parent] * (1 + stake * gain)
    return Process(depth, values)
