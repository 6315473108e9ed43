"""Seeded random generators shared by the unit and acceptance suites."""

from __future__ import annotations

import random
from fractions import Fraction

from treebet import (
    DepthGamble,
    GrowthFunction,
    IntervalForecast,
    LocalGamble,
    Markov,
    Process,
    RandomnessTest,
    Stationary,
    Table,
    cut_upper_prob,
    cylinder_bounds,
    interval,
    kelly_gamble,
)
from treebet.tree import bits, situations_up_to

ENDPOINT_POOL = [Fraction(0), Fraction(1, 4), Fraction(2, 5), Fraction(1, 2),
                 Fraction(7, 10), Fraction(1)]

FAIR = Stationary(interval("1/2"))
WIDE = Stationary(interval("2/5", "7/10"))


def rand_fraction(rng: random.Random, span: int = 4, max_den: int = 12) -> Fraction:
    return Fraction(rng.randint(-span * max_den, span * max_den), rng.randint(1, max_den))


def rand_prob(rng: random.Random, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def rand_interval(
    rng: random.Random,
    precise: bool = False,
    non_degenerate: bool = False,
    pool: list[Fraction] | None = None,
) -> IntervalForecast:
    def draw() -> Fraction:
        return rng.choice(pool) if pool is not None else rand_prob(rng)

    while True:
        lo, hi = draw(), draw()
        if precise:
            hi = lo
        if lo > hi:
            lo, hi = hi, lo
        if non_degenerate and (hi == 0 or lo == 1):
            continue
        return IntervalForecast(lo, hi)


def rand_local_gamble(rng: random.Random, span: int = 4) -> LocalGamble:
    return LocalGamble(rand_fraction(rng, span), rand_fraction(rng, span))


def rand_gamble(rng: random.Random, depth: int, span: int = 4) -> DepthGamble:
    return DepthGamble(depth, tuple(rand_fraction(rng, span) for _ in range(1 << depth)))


def rand_system(
    rng: random.Random,
    depth: int = 4,
    kind: str | None = None,
    **interval_kwargs,
):
    kind = kind or rng.choice(["stationary", "table", "markov"])
    if kind == "stationary":
        return Stationary(rand_interval(rng, **interval_kwargs))
    if kind == "table":
        overrides = {}
        for _ in range(rng.randint(0, 6)):
            n = rng.randint(0, depth)
            overrides[bits(rng.randrange(1 << n), n)] = rand_interval(rng, **interval_kwargs)
        return Table(rand_interval(rng, **interval_kwargs), overrides)
    order = rng.randint(0, 2)
    rows = {
        bits(j, n): rand_interval(rng, **interval_kwargs)
        for n in range(order + 1)
        for j in range(1 << n)
    }
    return Markov(order, rows)


def rand_table_system(rng: random.Random, depth: int, pool=ENDPOINT_POOL) -> Table:
    overrides = {}
    for s in situations_up_to(depth - 1):
        lo, hi = sorted((rng.choice(pool), rng.choice(pool)))
        overrides[s] = IntervalForecast(lo, hi)
    return Table(interval("1/2"), overrides)


_STAKES = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
_BURNS = [Fraction(1), Fraction(1), Fraction(1), Fraction(3, 4), Fraction(1, 2)]


def rand_supermartingale(
    rng: random.Random, fs, depth: int, root: Fraction = Fraction(1), positive: bool = False
) -> Process:
    """A non-negative supermartingale built from stake/burn moves.

    Each step multiplies by burn * (1 + stake * bet) where the bet has
    non-positive local upper expectation, so the property holds by
    construction; ``positive`` keeps the stake below 1 so capital never
    dies.
    """
    values = {"": root}
    for s in situations_up_to(depth - 1) if depth else []:
        stake = rng.choice(_STAKES[:-1] if positive else _STAKES)
        burn = rng.choice(_BURNS)
        direction = rng.choice(["on-one", "on-zero"])
        g = kelly_gamble(fs.at(s), direction)
        here = values[s]
        values[s + "1"] = here * burn * (1 + stake * g.on1)
        values[s + "0"] = here * burn * (1 + stake * g.on0)
    return Process(depth, values)


def ones_test(
    num_levels: int, max_depth: int | None = None, tail: GrowthFunction | None = None
) -> RandomnessTest:
    """Level n is the singleton cut {1^(n+1)}."""
    if max_depth is None:
        max_depth = num_levels
    levels = tuple(frozenset({"1" * (n + 1)}) for n in range(num_levels))
    return RandomnessTest(levels, max_depth=max_depth, tail=tail)


def rand_valid_test(
    rng: random.Random, fs, num_levels: int, depth: int
) -> tuple[RandomnessTest, str]:
    """A budget-respecting test whose levels are all hit by one common path.

    Needs a system whose cylinder upper probabilities decay along paths
    (intervals away from {0} and {1}); level n places the path's prefix at
    the first depth safely inside half the 2**-n budget, plus occasionally
    one off-path member if the exact total still fits.
    """
    w = "".join(rng.choice("01") for _ in range(depth))
    levels = []
    for n in range(num_levels):
        budget = Fraction(1, 1 << n)
        d = 0
        while cylinder_bounds(fs, w[:d])[0] > budget / 2:
            d += 1
            if d > depth:
                raise ValueError("system does not decay fast enough for this depth")
        members = {w[:d]}
        if d > 0 and rng.random() < 0.5:
            j = rng.randint(1, d)
            off = w[: j - 1] + ("0" if w[j - 1] == "1" else "1")
            off += "".join(rng.choice("01") for _ in range(rng.randint(0, depth - len(off))))
            candidate = members | {off}
            if cut_upper_prob(fs, candidate) <= budget:
                members = candidate
        levels.append(frozenset(members))
    return RandomnessTest(tuple(levels), max_depth=depth), w


def decaying_system(rng: random.Random, precise: bool = False):
    """A stationary or low-order markov system with factors at most 5/8."""
    pool = [Fraction(3, 8), Fraction(2, 5), Fraction(1, 2), Fraction(5, 8)]

    def one() -> IntervalForecast:
        lo, hi = sorted((rng.choice(pool), rng.choice(pool)))
        if precise:
            hi = lo
        return IntervalForecast(lo, hi)

    if rng.random() < 0.5:
        return Stationary(one())
    order = rng.randint(1, 2)
    rows = {bits(j, n): one() for n in range(order + 1) for j in range(1 << n)}
    return Markov(order, rows)
