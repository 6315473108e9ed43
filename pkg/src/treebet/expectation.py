"""Global upper/lower expectations of finitely-determined gambles.

A gamble that only depends on the first n bits is evaluated by exact
backward recursion: leaf values are folded towards the root, applying the
one-step upper (or lower) expectation at every interior node.  Upper and
lower probabilities of partial cuts and cylinder sets are special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DomainError
from .forecast import ForecastingSystem, IntervalForecast
from .local import LocalGamble, lower_expectation, upper_expectation
from .tree import ROOT, CutStatus, bits, cut_status, require_antichain, require_situation

_LocalRule = Callable[[IntervalForecast, LocalGamble], Fraction]


def _leaf_index(leaf: str) -> int:
    return int(leaf, 2) if leaf else 0


@dataclass(frozen=True)
class DepthGamble:
    """A reward determined by the first ``depth`` bits.

    ``values[i]`` is the reward on the leaf whose bits spell ``i`` in binary,
    so the tuple has exactly 2**depth entries.
    """

    depth: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError("gamble depth must be non-negative")
        if len(self.values) != 1 << self.depth:
            raise DomainError(
                f"depth-{self.depth} gamble needs {1 << self.depth} values, got {len(self.values)}"
            )

    @classmethod
    def constant(cls, depth: int, value) -> "DepthGamble":
        return cls(depth, (Fraction(value),) * (1 << depth))

    @classmethod
    def from_function(cls, depth: int, fn: Callable[[str], Fraction]) -> "DepthGamble":
        return cls(depth, tuple(Fraction(fn(bits(j, depth))) for j in range(1 << depth)))

    @classmethod
    def indicator(cls, cut: Iterable[str], depth: int) -> "DepthGamble":
        """Indicator of the cylinder union of ``cut`` at the given depth."""
        members = require_antichain(cut)
        values = [Fraction(0)] * (1 << depth)
        for t in members:
            if len(t) > depth:
                raise DomainError(f"cut member {t!r} deeper than gamble depth {depth}")
            width = depth - len(t)
            base = _leaf_index(t) << width
            for j in range(base, base + (1 << width)):
                values[j] = Fraction(1)
        return cls(depth, tuple(values))

    def at(self, leaf: str) -> Fraction:
        if len(leaf) != self.depth:
            raise DomainError(f"expected a depth-{self.depth} leaf, got {leaf!r}")
        return self.values[_leaf_index(leaf)]

    def __neg__(self) -> "DepthGamble":
        return DepthGamble(self.depth, tuple(-v for v in self.values))


def _fold(fs: ForecastingSystem, g: DepthGamble, s: str, rule: _LocalRule) -> Fraction:
    m = g.depth - len(s)
    if m < 0:
        raise DomainError(f"situation {s!r} deeper than gamble depth {g.depth}")
    base = _leaf_index(s) << m
    level = list(g.values[base:base + (1 << m)])
    for width in range(m - 1, -1, -1):
        level = [
            rule(fs.at(s + bits(j, width)), LocalGamble(on1=level[2 * j + 1], on0=level[2 * j]))
            for j in range(1 << width)
        ]
    return level[0]


def cond_upper(fs: ForecastingSystem, g: DepthGamble, s: str = ROOT) -> Fraction:
    """Conditional upper expectation of ``g`` at ``s``, by backward recursion."""
    require_situation(s)
    return _fold(fs, g, s, upper_expectation)


def cond_lower(fs: ForecastingSystem, g: DepthGamble, s: str = ROOT) -> Fraction:
    require_situation(s)
    return _fold(fs, g, s, lower_expectation)


def _sparse_cut_value(fs, t: str, below: list[str], rule: _LocalRule) -> Fraction:
    # ``below`` holds the cut members extending t; only their ancestors are
    # visited, so the recursion is linear in the total member length.
    if not below:
        return Fraction(0)
    if t in below:
        return Fraction(1)
    at = len(t)
    ones = [m for m in below if m[at] == "1"]
    zeros = [m for m in below if m[at] == "0"]
    return rule(
        fs.at(t),
        LocalGamble(
            on1=_sparse_cut_value(fs, t + "1", ones, rule),
            on0=_sparse_cut_value(fs, t + "0", zeros, rule),
        ),
    )


def _cut_prob(fs, cut, s, rule: _LocalRule) -> Fraction:
    members = require_antichain(cut)
    status = cut_status(s, members)
    if status in (CutStatus.IN_CUT, CutStatus.FOLLOWS_STRICTLY):
        return Fraction(1)
    if status is CutStatus.INCOMPARABLE:
        return Fraction(0)
    return _sparse_cut_value(fs, s, [m for m in members if m.startswith(s)], rule)


def cut_upper_prob(fs: ForecastingSystem, cut: Iterable[str], s: str = ROOT) -> Fraction:
    """Upper probability, conditional on ``s``, of ever passing through ``cut``."""
    return _cut_prob(fs, cut, s, upper_expectation)


def cut_lower_prob(fs: ForecastingSystem, cut: Iterable[str], s: str = ROOT) -> Fraction:
    return _cut_prob(fs, cut, s, lower_expectation)


def cut_value_map(
    fs: ForecastingSystem, cut: Iterable[str], depth: int, lower: bool = False
) -> dict[str, Fraction]:
    """Conditional cut probability at every situation of depth <= ``depth``.

    One bottom-up sweep; requires ``depth`` at or below no cut member.
    """
    members = require_antichain(cut)
    if any(len(t) > depth for t in members):
        raise DomainError("cut member deeper than the requested sweep depth")
    rule = lower_expectation if lower else upper_expectation
    values: dict[str, Fraction] = {}
    level = []
    for j in range(1 << depth):
        leaf = bits(j, depth)
        status = cut_status(leaf, members)
        hit = status in (CutStatus.IN_CUT, CutStatus.FOLLOWS_STRICTLY)
        value = Fraction(1) if hit else Fraction(0)
        values[leaf] = value
        level.append(value)
    for width in range(depth - 1, -1, -1):
        next_level = []
        for j in range(1 << width):
            t = bits(j, width)
            value = rule(fs.at(t), LocalGamble(on1=level[2 * j + 1], on0=level[2 * j]))
            values[t] = value
            next_level.append(value)
        level = next_level
    return values


def cylinder_bounds(fs: ForecastingSystem, s: str) -> tuple[Fraction, Fraction]:
    """Closed-form (upper, lower) probability of the cylinder set of ``s``."""
    require_situation(s)
    upper = Fraction(1)
    lower = Fraction(1)
    for k, bit in enumerate(s):
        forecast = fs.at(s[:k])
        if bit == "1":
            upper *= forecast.hi
            lower *= forecast.lo
        else:
            upper *= 1 - forecast.lo
            lower *= 1 - forecast.hi
    return upper, lower
