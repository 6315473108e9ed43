"""Command-line interface: evaluation, verification, conversion, sampling, analysis.

Exit codes: 0 success, 2 unparseable or invalid inputs, 3 semantic
verification failure, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .errors import (
    ConfigError,
    ContractError,
    DomainError,
    HorizonError,
    ParseError,
    ResourceError,
)
from .expectation import cut_lower_prob, cut_upper_prob
from .forecast import ForecastCursor, IntervalForecast
from .formats import (
    dump_process,
    dump_test,
    load,
    parse_forecasting_system,
    parse_growth,
    parse_process,
    parse_rational,
    parse_sequence,
    parse_test,
    save,
)
from .local import LocalGamble, lower_expectation, upper_expectation
from .martingale import check_supermartingale, kelly_gamble
from .randtest import (
    assemble_test_supermartingale,
    combine_universal,
    martingale_to_test,
    schnorr_test_from_martingale,
    supermartingale_from_test,
    validate_ml_test,
    validate_schnorr_tail,
)
from .sampling import SELECTORS, sample_path
from .tree import parse_situation, require_antichain

DEFAULT_DEPTH_CAP = 22
DEFAULT_HORIZON = 1 << 20
DEFAULT_BATTERY = ("1,on-one", "1,on-zero", "1/2,on-one", "1/2,on-zero")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treebet")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("local", help="one-step upper and lower expectation")
    p.add_argument("--interval", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--gamble", nargs=2, required=True, metavar=("ON1", "ON0"))

    p = sub.add_parser("cutprob", help="upper/lower probability of a partial cut")
    p.add_argument("--fs", required=True)
    p.add_argument("--cut", required=True, help="comma-separated situations")
    p.add_argument("--cond", default="@", help="conditioning situation (default @)")
    p.add_argument("--lower", action="store_true")
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)

    p = sub.add_parser("convert", help="conversions between processes and tests")
    p.add_argument("direction", choices=["to-test", "to-martingale", "schnorr-from-martingale", "universal"])
    p.add_argument("inputs", nargs="*", help="test files (universal direction)")
    p.add_argument("--fs", required=True)
    p.add_argument("--process")
    p.add_argument("--test")
    p.add_argument("--levels", type=int)
    p.add_argument("--rho", help="growth spec 'table v0 v1 ... ; affine a b c'")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--out", required=True)
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)

    p = sub.add_parser("sample", help="sample bits from a compatible precise system")
    p.add_argument("--fs", required=True)
    p.add_argument("--selector", choices=list(SELECTORS), default="mid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="run a strategy battery along a sequence")
    p.add_argument("--fs", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--kelly", action="append", metavar="STAKE,DIRECTION",
                   help="strategy spec, e.g. 1,on-one (repeatable)")
    p.add_argument("--test", action="append", default=[], help="test file (repeatable)")
    return parser


def _parse_interval_args(lo: str, hi: str) -> IntervalForecast:
    return IntervalForecast(parse_rational(lo), parse_rational(hi))


def cmd_local(args) -> int:
    forecast = _parse_interval_args(*args.interval)
    f = LocalGamble(parse_rational(args.gamble[0]), parse_rational(args.gamble[1]))
    print(f"upper {upper_expectation(forecast, f)}  lower {lower_expectation(forecast, f)}")
    return 0


def cmd_cutprob(args) -> int:
    fs = load(args.fs, parse_forecasting_system)
    cut = require_antichain(parse_situation(part) for part in args.cut.split(","))
    if cut and max(len(t) for t in cut) > args.depth_cap:
        raise ResourceError(f"cut deeper than --depth-cap {args.depth_cap}")
    cond = parse_situation(args.cond)
    prob = cut_lower_prob(fs, cut, cond) if args.lower else cut_upper_prob(fs, cut, cond)
    print(prob)
    return 0


def _report_budgets(reports) -> bool:
    for r in reports:
        verdict = "pass" if r.passed else "FAIL"
        print(f"level {r.level}: actual {r.actual} budget {r.budget} {verdict}")
    return all(r.passed for r in reports)


def cmd_convert(args) -> int:
    fs = load(args.fs, parse_forecasting_system)

    if args.direction == "to-test":
        if not args.process:
            raise ParseError("to-test needs --process")
        process = load(args.process, parse_process)
        if process.depth > args.depth_cap:
            raise ResourceError(f"process deeper than --depth-cap {args.depth_cap}")
        if process.root != 1:
            print(f"not a test supermartingale: root is {process.root}, not 1", file=sys.stderr)
            return 3
        negative = [s for s, v in process.values.items() if v < 0]
        violations = check_supermartingale(fs, process)
        if negative or violations:
            where = sorted(negative, key=lambda s: (len(s), s))[0] if negative else violations[0]
            print(f"not a test supermartingale: check fails at {where or '@'}", file=sys.stderr)
            return 3
        test = martingale_to_test(process, fs)
        if not _report_budgets(validate_ml_test(fs, test)):
            return 3
        print("all budgets pass")
        save(args.out, dump_test(test))
        return 0

    if args.direction == "to-martingale":
        if not args.test or args.levels is None:
            raise ParseError("to-martingale needs --test and --levels")
        test = load(args.test, parse_test)
        if test.max_depth > args.depth_cap:
            raise ResourceError(f"test deeper than --depth-cap {args.depth_cap}")
        cutoff = test.max_depth + 1
        value, remainder = supermartingale_from_test(fs, test, args.levels, cutoff)
        process = assemble_test_supermartingale(fs, test, args.levels)
        violations = check_supermartingale(fs, process)
        print(f"root {value} normalized 1")
        print(f"remainder bound {remainder}")
        if violations:
            print(f"supermartingale check FAIL at {violations[0] or '@'}")
            return 3
        print("supermartingale check pass")
        save(args.out, dump_process(process))
        return 0

    if args.direction == "schnorr-from-martingale":
        if not args.process or not args.rho:
            raise ParseError("schnorr-from-martingale needs --process and --rho")
        process = load(args.process, parse_process)
        if process.depth > args.depth_cap:
            raise ResourceError(f"process deeper than --depth-cap {args.depth_cap}")
        rho = parse_growth(args.rho)
        test = schnorr_test_from_martingale(process, rho, fs, horizon=args.horizon)
        budgets_ok = _report_budgets(validate_ml_test(fs, test))
        tail_reports = validate_schnorr_tail(fs, test, k_max=max(4, test.num_levels))
        for r in tail_reports:
            verdict = "pass" if r.passed else "FAIL"
            print(f"tail K={r.k}: cutoff {r.cutoff} worst {r.worst_actual} budget {r.budget} {verdict}")
        if not budgets_ok or not all(r.passed for r in tail_reports):
            return 3
        print("all budgets pass")
        save(args.out, dump_test(test))
        return 0

    # universal
    tests = [load(path, parse_test) for path in args.inputs]
    if any(t.max_depth > args.depth_cap for t in tests):
        raise ResourceError(f"test deeper than --depth-cap {args.depth_cap}")
    combined = combine_universal(fs, tests)
    if not _report_budgets(validate_ml_test(fs, combined)):
        return 3
    print("all budgets pass")
    save(args.out, dump_test(combined))
    return 0


def cmd_sample(args) -> int:
    fs = load(args.fs, parse_forecasting_system)
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    print(sample_path(fs, args.selector, args.n, args.seed))
    return 0


def _log2_label(value: Fraction) -> str:
    if value <= 0:
        return "-inf"
    return f"{math.log2(value.numerator) - math.log2(value.denominator):.6g}"


def _parse_kelly(spec: str) -> tuple[Fraction, str]:
    parts = spec.split(",")
    if len(parts) != 2 or parts[1] not in ("on-one", "on-zero"):
        raise ParseError(f"bad kelly spec {spec!r} (want STAKE,on-one or STAKE,on-zero)")
    stake = parse_rational(parts[0])
    if not 0 <= stake <= 1:
        raise ParseError(f"kelly stake {stake} outside [0, 1]")
    return stake, parts[1]


def cmd_analyze(args) -> int:
    fs = load(args.fs, parse_forecasting_system)
    sequence = load(args.seq, parse_sequence)
    strategies = [_parse_kelly(spec) for spec in (args.kelly or DEFAULT_BATTERY)]
    tests = [load(path, parse_test) for path in args.test]

    labels = [f"kelly({stake},{direction})" for stake, direction in strategies]
    out = sys.stdout
    out.write("# n\tbit\t" + "\t".join(labels) + "\tmax_log2_capital\ttest_hits\n")

    # members of every supplied test, grouped by depth for O(1) lookup per step
    by_depth: dict[int, list[tuple[int, str]]] = {}
    for test in tests:
        for level, cut in enumerate(test.levels):
            for member in cut:
                by_depth.setdefault(len(member), []).append((level, member))
    test_horizon = max(by_depth, default=-1)

    cursor = ForecastCursor(fs)
    capitals = [Fraction(1)] * len(strategies)
    max_capital = Fraction(1)
    max_log2 = _log2_label(max_capital)
    hit_levels: set[int] = set()
    prefix_buffer: list[str] = []

    def hits_label() -> str:
        return ",".join(str(n) for n in sorted(hit_levels)) if hit_levels else "-"

    def check_hits(depth: int) -> None:
        if depth > test_horizon:
            return
        here = "".join(prefix_buffer)
        for level, member in by_depth.get(depth, []):
            if member == here:
                hit_levels.add(level)

    check_hits(0)
    chunk = ["0\t-\t" + "\t".join(str(c) for c in capitals) + f"\t{max_log2}\t{hits_label()}"]
    for n, bit in enumerate(sequence, start=1):
        forecast = cursor.current()
        for i, (stake, direction) in enumerate(strategies):
            if capitals[i] == 0:
                continue
            g = kelly_gamble(forecast, direction)
            gain = g.on1 if bit == "1" else g.on0
            capitals[i] *= 1 + stake * gain
            if capitals[i] > max_capital:
                max_capital = capitals[i]
                max_log2 = _log2_label(max_capital)
        cursor.push(bit)
        if n <= test_horizon:
            prefix_buffer.append(bit)
            check_hits(n)
        capital_cols = "\t".join(str(c) for c in capitals)
        chunk.append(f"{n}\t{bit}\t{capital_cols}\t{max_log2}\t{hits_label()}")
        if len(chunk) >= 65536:
            out.write("\n".join(chunk) + "\n")
            chunk = []
    if chunk:
        out.write("\n".join(chunk) + "\n")

    deficiency = max(hit_levels) + 1 if hit_levels else 0
    ville_bound = 1 / max_capital
    out.write(
        f"# summary max_log2_capital={max_log2} test_deficiency={deficiency} "
        f"max_capital={max_capital} ville_bound={ville_bound}\n"
    )
    return 0


_COMMANDS = {
    "local": cmd_local,
    "cutprob": cmd_cutprob,
    "convert": cmd_convert,
    "sample": cmd_sample,
    "analyze": cmd_analyze,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ConfigError, DomainError, OSError) as exc:
        print(f"treebet: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"treebet: {exc}", file=sys.stderr)
        return 3
    except (ResourceError, HorizonError) as exc:
        print(f"treebet: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
