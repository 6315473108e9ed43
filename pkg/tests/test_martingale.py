"""Supermartingale verification, Ville cuts, rationalization, strategies."""

import random
from fractions import Fraction

import pytest

from treebet import (
    Process,
    bound_check,
    capital_along,
    check_supermartingale,
    check_test_supermartingale,
    cumulative_bound,
    kelly_gamble,
    kelly_process,
    rationalize,
    upper_expectation,
    ville_threshold,
)
from treebet.errors import ContractError, DomainError
from treebet.tree import situations_up_to

from gen import FAIR, WIDE, rand_supermartingale, rand_system

DOUBLER = kelly_process(FAIR, 1, "on-one", 4)


def test_process_totality_enforced():
    with pytest.raises(DomainError):
        Process(1, {"": Fraction(1), "0": Fraction(1)})
    with pytest.raises(DomainError):
        Process(0, {"": Fraction(1), "0": Fraction(1), "1": Fraction(1)})


def test_doubler_is_test_supermartingale():
    assert check_supermartingale(FAIR, DOUBLER) == []
    assert check_test_supermartingale(FAIR, DOUBLER)


def test_drift_process_violates_everywhere():
    drift = Process.from_function(3, lambda s: Fraction(len(s)))
    assert check_supermartingale(FAIR, drift) == sorted(
        situations_up_to(2), key=lambda s: (len(s), s)
    )
    assert not check_test_supermartingale(FAIR, drift)


def test_constant_process_cases():
    one = Process.from_function(2, lambda s: Fraction(1))
    two = Process.from_function(2, lambda s: Fraction(2))
    assert check_supermartingale(WIDE, two) == []
    assert check_test_supermartingale(WIDE, one)
    assert not check_test_supermartingale(WIDE, two)
    dipped = Process.from_function(2, lambda s: Fraction(-1) if s == "01" else Fraction(1))
    assert not check_test_supermartingale(FAIR, dipped)


def test_capital_along():
    assert capital_along(DOUBLER, "111") == [1, 2, 4, 8]
    assert capital_along(DOUBLER, "10") == [1, 2, 0]
    ones = Process.from_function(3, lambda s: Fraction(1))
    assert capital_along(ones, "010") == [1, 1, 1, 1]
    with pytest.raises(DomainError):
        capital_along(DOUBLER, "01010")


@pytest.mark.parametrize(
    "threshold, cut, bound, actual",
    [
        (4, {"11"}, Fraction(1, 4), Fraction(1, 4)),
        (3, {"11"}, Fraction(1, 3), Fraction(1, 4)),
        (1, {""}, Fraction(1), Fraction(1)),
    ],
)
def test_ville_threshold_doubler(threshold, cut, bound, actual):
    result = ville_threshold(FAIR, DOUBLER, threshold)
    assert result.cut == frozenset(cut)
    assert result.bound == bound
    assert result.actual == actual


def test_ville_threshold_domain():
    with pytest.raises(DomainError):
        ville_threshold(FAIR, DOUBLER, 0)


def test_ville_inequality_random(seed=59):
    rng = random.Random(seed)
    for _ in range(40):
        fs = rand_system(rng, depth=6, non_degenerate=True)
        process = rand_supermartingale(rng, fs, depth=6)
        for threshold in (2, 3, 4, 8):
            result = ville_threshold(fs, process, threshold)
            assert result.actual <= result.bound


def test_bound_check_cases():
    assert bound_check(FAIR, DOUBLER)
    # the doubler is tight against the fair-coin ceiling on the all-ones path
    assert DOUBLER.at("1111") == cumulative_bound(FAIR, "1111")
    ones = Process.from_function(3, lambda s: Fraction(1))
    assert bound_check(WIDE, ones)


def test_bound_check_random(seed=61):
    rng = random.Random(seed)
    for _ in range(40):
        fs = rand_system(rng, depth=6, non_degenerate=True)
        assert bound_check(fs, rand_supermartingale(rng, fs, depth=6))


def test_descending_path_exists(seed=67):
    # from any node some descendant path never climbs above it
    rng = random.Random(seed)
    for _ in range(20):
        fs = rand_system(rng, depth=6, non_degenerate=True)
        process = rand_supermartingale(rng, fs, depth=6)
        for s in situations_up_to(process.depth):
            t = s
            while len(t) < process.depth:
                t += "1" if process.values[t + "1"] <= process.values[t + "0"] else "0"
                assert process.values[t] <= process.values[s]


def test_violations_grow_with_widening(seed=71):
    rng = random.Random(seed)
    from treebet import IntervalForecast, Stationary

    for _ in range(40):
        narrow = rand_system(rng, kind="stationary")
        lo, hi = narrow.interval.lo, narrow.interval.hi
        wide = Stationary(IntervalForecast(lo / 2, hi + (1 - hi) / 2))
        process = Process.from_function(
            4, lambda s: Fraction(rng.randint(0, 24), 8)
        )
        assert set(check_supermartingale(narrow, process)) <= set(
            check_supermartingale(wide, process)
        )


def _schedule_for(target: Process, rng: random.Random):
    cache = {}

    def q(s: str, accuracy: int) -> Fraction:
        key = (s, accuracy)
        if key not in cache:
            if s == "" and accuracy == 0:
                cache[key] = Fraction(1)
            else:
                budget = Fraction(1, 1 << accuracy)
                noise = budget * Fraction(rng.randint(-8, 8), 8)
                cache[key] = target.values[s] + noise
        return cache[key]

    return q


def test_rationalize_constant_target():
    q = lambda s, accuracy: Fraction(1)
    r = rationalize(q, FAIR, 2)
    assert r.root == 1
    assert r.at("1") == Fraction(5, 8)
    assert r.at("01") == Fraction(7, 16)
    assert check_supermartingale(FAIR, r) == []
    for s in situations_up_to(2):
        assert abs(4 * r.values[s] - 1) == 3 * Fraction(1, 1 << len(s))


def test_rationalize_contract():
    with pytest.raises(ContractError):
        rationalize(lambda s, accuracy: Fraction(2), FAIR, 2)


def test_rationalize_random_targets(seed=73):
    rng = random.Random(seed)
    for _ in range(30):
        fs = rand_system(rng, depth=5, non_degenerate=True)
        target = rand_supermartingale(rng, fs, depth=5)
        r = rationalize(_schedule_for(target, rng), fs, 5)
        assert r.root == 1
        assert all(v > 0 for v in r.values.values())
        assert check_supermartingale(fs, r) == []
        for s in situations_up_to(5):
            assert abs(4 * r.values[s] - target.values[s]) <= 4 * Fraction(1, 1 << len(s))


def test_kelly_process_cases():
    assert DOUBLER.at("11") == 4 and DOUBLER.at("10") == 0
    flat = kelly_process(WIDE, 0, "on-zero", 3)
    assert all(v == 1 for v in flat.values.values())
    half = kelly_process(WIDE, Fraction(1, 2), "on-one", 2)
    assert half.at("11") / half.at("1") == Fraction(17, 14)
    assert check_test_supermartingale(WIDE, half)


def test_kelly_gamble_zero_upper_expectation(seed=79):
    rng = random.Random(seed)
    for _ in range(60):
        fs = rand_system(rng, non_degenerate=True)
        forecast = fs.at("01")
        for direction in ("on-one", "on-zero"):
            assert upper_expectation(forecast, kelly_gamble(forecast, direction)) == 0


def test_kelly_degenerate_rejected():
    from treebet import Stationary, interval

    with pytest.raises(DomainError):
        kelly_process(Stationary(interval(0, 0)), 1, "on-one", 2)
    with pytest.raises(DomainError):
        kelly_process(FAIR, Fraction(3, 2), "on-one", 2)


def test_kelly_random_pass_check(seed=83):
    rng = random.Random(seed)
    for _ in range(30):
        fs = rand_system(rng, depth=5, non_degenerate=True)
        stake = Fraction(rng.randint(0, 8), 8)
        process = kelly_process(fs, stake, rng.choice(["on-one", "on-zero"]), 5)
        assert check_test_supermartingale(fs, process)
