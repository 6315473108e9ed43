"""Parsing and canonical serialisation of the text formats."""

import random
from fractions import Fraction

import pytest

from treebet import Markov, RandomnessTest, Stationary, Table, affine, interval
from treebet.errors import ConfigError, ParseError
from treebet.formats import (
    dump_forecasting_system,
    dump_growth,
    dump_process,
    dump_test,
    parse_forecasting_system,
    parse_growth,
    parse_process,
    parse_rational,
    parse_sequence,
    parse_test,
)

from gen import ones_test, rand_supermartingale, rand_system


def test_parse_rational():
    assert parse_rational("7/10") == Fraction(7, 10)
    assert parse_rational("-3") == Fraction(-3)
    for bad in ("0.5", "1/2/3", "x", ""):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_stationary_round_trip():
    text = "kind: stationary\ninterval: 2/5 7/10\n"
    fs = parse_forecasting_system(text)
    assert fs == Stationary(interval("2/5", "7/10"))
    assert dump_forecasting_system(fs) == text


def test_table_round_trip_with_comments():
    text = "# a config\nkind: table\ndefault: 1/2 1/2\nnode @ 2/5 7/10  # root\nnode 01 1/4 3/4\n"
    fs = parse_forecasting_system(text)
    assert isinstance(fs, Table)
    assert fs.at("") == interval("2/5", "7/10")
    assert fs.at("01") == interval("1/4", "3/4")
    assert fs.at("111") == interval("1/2")
    canonical = dump_forecasting_system(fs)
    assert parse_forecasting_system(canonical) == fs
    assert dump_forecasting_system(parse_forecasting_system(canonical)) == canonical


def test_markov_round_trip():
    text = "kind: markov\norder: 1\nrow @ 1/2 1/2\nrow 0 1/2 1/2\nrow 1 3/10 3/10\n"
    fs = parse_forecasting_system(text)
    assert isinstance(fs, Markov)
    assert fs.at("01") == interval("3/10")
    assert dump_forecasting_system(fs) == text


def test_markov_incomplete_rows():
    with pytest.raises(ConfigError):
        parse_forecasting_system("kind: markov\norder: 1\nrow @ 1/2 1/2\n")


def test_forecasting_system_parse_errors():
    for bad in ("", "interval: 1/2 1/2", "kind: exotic", "kind: stationary\ninterval: 1/2\n"):
        with pytest.raises(ParseError):
            parse_forecasting_system(bad)


def test_process_round_trip(seed=113):
    rng = random.Random(seed)
    fs = rand_system(rng, depth=4, non_degenerate=True)
    process = rand_supermartingale(rng, fs, depth=4)
    text = dump_process(process)
    again = parse_process(text)
    assert again.depth == process.depth and again.values == process.values
    assert dump_process(again) == text


def test_process_missing_node():
    with pytest.raises(ParseError):
        parse_process("depth: 1\n@ 1\n0 1\n")
    with pytest.raises(ParseError):
        parse_process("depth: 1\n@ 1\n0 1\n1 1\n0 2\n")


def test_growth_spec_round_trip():
    g = parse_growth("table 1 2 4 ; affine 1 4 1")
    assert [g(n) for n in range(6)] == [1, 2, 4, 7, 8, 9]
    assert dump_growth(g) == "table 1 2 4 ; affine 1 4 1"
    empty_head = parse_growth("table ; affine 2 0 1")
    assert dump_growth(empty_head) == "table ; affine 2 0 1"
    with pytest.raises(ParseError):
        parse_growth("affine 1 0 1")


def test_test_file_round_trip():
    test = ones_test(3, tail=affine(1))
    text = dump_test(test)
    again = parse_test(text)
    assert again == test
    assert dump_test(again) == text


def test_test_file_without_tail():
    test = RandomnessTest((frozenset({"0", "1"}), frozenset()), max_depth=2)
    again = parse_test(dump_test(test))
    assert again == test and again.tail is None


def test_test_file_rejects_bad_levels():
    with pytest.raises(ParseError):
        parse_test("levels: 1\ndepth: 2\nlevel 3 01\n")
    with pytest.raises(ParseError):
        parse_test("levels: 1\ndepth: 2\nlevel 0 0\nlevel 0 01\n")  # not an antichain
    with pytest.raises(ParseError):
        parse_test("depth: 2\n")


def test_sequence_parsing():
    assert parse_sequence("01 10\n# all ones\n11\n") == "011011"
    with pytest.raises(ParseError):
        parse_sequence("012")
