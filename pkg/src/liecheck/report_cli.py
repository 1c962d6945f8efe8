"""Command line driver: structured reports, golden regressions, selftest.

Every subcommand prints a human-readable summary to stdout and, with
``--report PATH``, writes a JSON document whose payload is deterministic:
rationals are serialized as "p/q" strings, keys are sorted, and the only
run-dependent field is elapsed_ms.

Exit codes: 0 success, 1 verification or selftest failure, 2 bad usage,
3 unknown case label.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction as Q

from . import __version__
from .cases import (
    ALL_FAMILIES,
    CLASSICAL_FAMILIES,
    CaseData,
    ambient_to_ktype,
    get_case,
    list_cases,
    validate_case,
)
from .data import golden
from .errors import ConstructionError, UnknownCaseError, UsageError
from .pencil import (
    coordinate_names,
    default_box,
    naive_bound,
    parabolic_bound,
    parse_box,
    sp4r_family,
    verify_box,
)
from .spin import spin_norm_sq, variant_norms_sq
from .usmall import enumerate_usmall, iter_usmall

LONG_RUN_FAMILIES = ("EVIII", "EIX")


def _fmt_q(value) -> str:
    """Rational as p/q, integers without the denominator (human output)."""
    q = Q(value)
    return str(q)


def _encode(value):
    """JSON-safe payload: Fractions become 'p/q' strings, tuples lists."""
    if isinstance(value, Q):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _write_report(path, case_label, command, parameters, results, elapsed_ms):
    doc = {
        "tool_version": __version__,
        "case": case_label,
        "command": command,
        "parameters": _encode(parameters),
        "results": _encode(results),
        "elapsed_ms": int(elapsed_ms),
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _case_from_args(args) -> CaseData:
    return get_case(args.case, getattr(args, "n", None))


def _parse_coords(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(
            f"coordinates must be comma-separated integers, got {text!r}"
        ) from None


def _word_text(word) -> str:
    if not word:
        return "e"
    return " ".join(f"s{i + 1}" for i in word)


# ----------------------------------------------------------------- commands


def cmd_list_cases(args) -> int:
    t0 = time.monotonic()
    rows = list_cases()
    print(
        f"{'family':<8} {'param':>5} {'rank(g)':>7} {'rank(k)':>7}"
        f" {'center':>6} {'variants':>8}"
    )
    for d in rows:
        print(
            f"{d.family:<8} {'n' if d.parametrized else '-':>5}"
            f" {d.rank_g:>7} {d.rank_k:>7}"
            f" {'yes' if d.k_has_center else 'no':>6}"
            f" {'-' if d.num_variants is None else d.num_variants:>8}"
        )
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            "-",
            "list-cases",
            {},
            {"cases": [asdict(d) for d in rows]},
            elapsed,
        )
    return 0


def cmd_case_show(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    names = coordinate_names(case)
    print(f"case {case.id.label}")
    print(f"  ambient dimension : {len(case.rho)}")
    print(f"  restricted rank   : {case.g_restricted.rank}")
    print(f"  positive roots    : {len(case.g_restricted.positive_roots)}")
    print(f"  k rank            : {case.rank_k}"
          f"  (center: {'yes' if case.k_has_center else 'no'})")
    print(f"  k-type coordinates: {', '.join(names)}")
    print(f"  rho               : ({', '.join(_fmt_q(c) for c in case.rho)})")
    print(f"  rho_c             : ({', '.join(_fmt_q(c) for c in case.rho_c)})")

    def vec(v):
        return "(" + ", ".join(_fmt_q(c) for c in v) + ")"

    print(f"  step direction    : {case.beta_ktype}  (ambient {vec(case.beta)})")
    if case.beta_second is not None:
        second = ambient_to_ktype(case, case.beta_second)
        print(f"  second direction  : {second}  (ambient {vec(case.beta_second)})")
    print(f"  |W^1|             : {case.num_variants}")
    print("  spin shifts (k-type coordinates):")
    for j, v in enumerate(case.rho_n_variants):
        if case.k_has_center:
            coords = tuple(_fmt_q(c) for c in v)
        else:
            coords = ambient_to_ktype(case, v)
        print(f"    [{j:>3}] {coords}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        shifts = []
        for v in case.rho_n_variants:
            if case.k_has_center:
                shifts.append([Q(c) for c in v])
            else:
                shifts.append(list(ambient_to_ktype(case, v)))
        results = {
            "label": case.id.label,
            "ambient_dimension": len(case.rho),
            "positive_roots": len(case.g_restricted.positive_roots),
            "rank_k": case.rank_k,
            "k_has_center": case.k_has_center,
            "coordinate_names": list(names),
            "rho": [Q(c) for c in case.rho],
            "rho_c": [Q(c) for c in case.rho_c],
            "step_direction": list(case.beta_ktype),
            "num_variants": case.num_variants,
            "spin_shifts": shifts,
        }
        _write_report(args.report, case.id.label, "case show", {}, results, elapsed)
    return 0


def cmd_usmall_count(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    count = enumerate_usmall(case, jobs=args.jobs)
    print(count)
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            case.id.label,
            "usmall count",
            {"jobs": args.jobs},
            {"count": count},
            elapsed,
        )
    return 0


def cmd_usmall_dump(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    names = coordinate_names(case)
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8", newline="")
    count = 0
    try:
        if args.format == "csv":
            writer = csv.writer(out)
            writer.writerow(list(names) + ["spin_norm_sq"])
            for coords in iter_usmall(case):
                s = spin_norm_sq(case, coords)
                writer.writerow(list(coords) + [f"{s.numerator}/{s.denominator}"])
                count += 1
        else:
            for coords in iter_usmall(case):
                s = spin_norm_sq(case, coords)
                out.write(
                    json.dumps(
                        {
                            "coords": list(coords),
                            "spin_norm_sq": f"{s.numerator}/{s.denominator}",
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
                count += 1
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out != "-":
        print(f"wrote {count} rows to {args.out}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            case.id.label,
            "usmall dump",
            {"format": args.format, "out": args.out},
            {"count": count},
            elapsed,
        )
    return 0


def cmd_spin_norm(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    coords = _parse_coords(args.mu)
    value = spin_norm_sq(case, coords)
    print(_fmt_q(value))
    per_variant = None
    if args.variants:
        per_variant = variant_norms_sq(case, coords)
        for j, v in enumerate(per_variant):
            print(f"  [{j:>3}] {_fmt_q(v)}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        results = {"mu": list(coords), "spin_norm_sq": value}
        if per_variant is not None:
            results["variants"] = list(per_variant)
        _write_report(
            args.report,
            case.id.label,
            "spin-norm",
            {"mu": list(coords)},
            results,
            elapsed,
        )
    return 0


def cmd_w1(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    print(case.num_variants)
    if args.words:
        for j, word in enumerate(case.w1):
            print(f"  [{j:>3}] {_word_text(word)}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        results = {"size": case.num_variants}
        if args.words:
            results["words"] = [[i + 1 for i in word] for word in case.w1]
        _write_report(args.report, case.id.label, "w1", {}, results, elapsed)
    return 0


def cmd_bounds(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    naive = naive_bound(case)
    table = [parabolic_bound(case, k) for k in range(1, case.rank_k + 1)]
    print(f"case {case.id.label}")
    print(f"  naive step bound: {_fmt_q(naive)}")
    print("  parabolic bounds by omitted k-simple root:")
    for k, value in enumerate(table, start=1):
        print(f"    k={k}: {_fmt_q(value)}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            case.id.label,
            "bounds",
            {},
            {"naive": naive, "parabolic": table},
            elapsed,
        )
    return 0


def _verify_payload(case: CaseData, rep) -> dict:
    names = coordinate_names(case)
    return {
        "case": rep.case,
        "box": rep.box.render(names),
        "scanned": rep.scanned,
        "filtered": rep.filtered,
        "violations": [
            {"coords": list(coords), "margin_sq": margin}
            for coords, margin in rep.violations
        ],
        "min_margin_sq": rep.min_margin_sq,
        "elapsed_ms": rep.elapsed_ms,
    }


def cmd_verify(args) -> int:
    t0 = time.monotonic()
    case = _case_from_args(args)
    if (
        case.id.family in LONG_RUN_FAMILIES
        and args.box == "default"
        and not args.long
    ):
        raise UsageError(
            f"{case.id.label}: the default box is a long run "
            "(hours of CPU time); pass --long to confirm"
        )
    box = default_box(case) if args.box == "default" else parse_box(args.box, case)
    rep = verify_box(
        case,
        box,
        jobs=args.jobs,
        shortcut=not args.no_shortcut,
        log=print if args.progress else None,
    )
    names = coordinate_names(case)
    print(f"case      : {case.id.label}")
    print(f"box       : {box.render(names)}")
    print(f"scanned   : {rep.scanned}")
    print(f"filtered  : {rep.filtered}")
    if rep.min_margin_sq is not None:
        print(f"min margin: {_fmt_q(rep.min_margin_sq)}")
    print(f"violations: {len(rep.violations)}")
    shown = rep.violations[:20]
    for coords, margin in shown:
        print(f"  {coords}: margin {_fmt_q(margin)}")
    if len(rep.violations) > len(shown):
        print(f"  ... and {len(rep.violations) - len(shown)} more")
    if rep.ok:
        print("OK: every filtered k-type in the box has a strictly positive step margin")
    else:
        print("VIOLATION: some step margins are not strictly positive")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            case.id.label,
            "verify",
            {
                "box": box.render(names),
                "jobs": args.jobs,
                "shortcut": not args.no_shortcut,
            },
            _verify_payload(case, rep),
            elapsed,
        )
    return 0 if rep.ok else 1


def cmd_sp4r_pencils(args) -> int:
    t0 = time.monotonic()
    table = golden()["sp4r_pencils"]
    results = {}
    for direction in ("descending", "ascending"):
        entry = table[direction]
        min_m = entry["min_m"]
        rows = []
        print(f"{direction} family: member = "
              f"{tuple(entry['start'])} + m*{tuple(entry['direction'])}")
        print(f"  {'m':>4} {'member':>12} {'step-aligned':>14}"
              f" {'member norm':>12} {'step-other':>12}")
        for m in range(min_m, args.m_max + 1):
            pt = sp4r_family(m, direction)
            print(
                f"  {m:>4} {str(pt.member):>12} {_fmt_q(pt.good_sq):>14}"
                f" {_fmt_q(pt.mid_sq):>12} {_fmt_q(pt.bad_sq):>12}"
            )
            rows.append(
                {
                    "m": m,
                    "member": list(pt.member),
                    "good_member": list(pt.good_member),
                    "bad_member": list(pt.bad_member),
                    "good_sq": pt.good_sq,
                    "mid_sq": pt.mid_sq,
                    "bad_sq": pt.bad_sq,
                }
            )
        results[direction] = rows
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            "SP4R",
            "sp4r pencils",
            {"m_max": args.m_max},
            results,
            elapsed,
        )
    return 0


# ----------------------------------------------------------------- selftest


@dataclass
class SelftestItem:
    name: str
    expected: str
    computed: str
    ok: bool


def _quad(coeffs, m: int) -> int:
    a, b, c = coeffs
    return a * m * m + b * m + c


def _sorted_tuples(vectors) -> list[tuple]:
    return sorted(tuple(v) for v in vectors)


def _bound_matches(computed: Q, expected) -> bool:
    if expected == "pos":
        return computed > 0
    if expected == "nonneg":
        return computed >= 0
    return computed == Q(expected)


def run_selftest(long: bool = False, jobs: int = 1, golden_data=None, log=None):
    """Recompute every tabulated constant and compare against the golden data.

    golden_data overrides the packaged table (used by the negative tests);
    log, when given, receives one formatted line per finished item.
    """
    data = golden_data if golden_data is not None else golden()
    items: list[SelftestItem] = []

    def add(name, expected, computed, ok):
        item = SelftestItem(name, str(expected), str(computed), bool(ok))
        items.append(item)
        if log is not None:
            status = "ok " if item.ok else "FAIL"
            log(f"  {status} {item.name:<28} expected {item.expected}"
                f" | computed {item.computed}")
        return item

    def sample_case(family):
        return get_case(family, 2 if family in CLASSICAL_FAMILIES else None)

    for family in ALL_FAMILIES:
        case = sample_case(family)
        checks = validate_case(case)
        bad = [c.name for c in checks if not c.ok]
        add(
            f"validate-{family}",
            "all internal checks pass",
            f"{len(checks)} checks pass" if not bad else "failed: " + ", ".join(bad),
            not bad,
        )

    for family, expected in data["usmall_counts"].items():
        if family in LONG_RUN_FAMILIES and not long:
            continue
        case = get_case(family)
        count = enumerate_usmall(case, jobs=jobs)
        add(f"usmall-count-{family}", expected, count, count == expected)

    for family, expected in data["min_coset_counts"].items():
        case = sample_case(family)
        add(f"w1-size-{family}", expected, case.num_variants,
            case.num_variants == expected)

    for family, printed in data["rho_n_ktype"].items():
        case = get_case(family)
        computed = _sorted_tuples(
            ambient_to_ktype(case, v) for v in case.rho_n_variants
        )
        expected = _sorted_tuples(tuple(row) for row in printed)
        add(f"rho-n-{family}", expected, computed, computed == expected)

    sp4r = get_case("SP4R")
    expected_amb = _sorted_tuples(
        tuple(Q(c) for c in row) for row in data["sp4r_rho_n_ambient"]
    )
    computed_amb = _sorted_tuples(sp4r.rho_n_variants)
    add(
        "rho-n-SP4R",
        [tuple(str(c) for c in row) for row in expected_amb],
        [tuple(str(c) for c in row) for row in computed_amb],
        computed_amb == expected_amb,
    )

    for family, printed in data["parabolic_bounds"].items():
        case = get_case(family)
        computed = [parabolic_bound(case, k) for k in range(1, case.rank_k + 1)]
        ok = len(computed) == len(printed) and all(
            _bound_matches(c, e) for c, e in zip(computed, printed)
        )
        add(
            f"bounds-{family}",
            printed,
            [str(c) for c in computed],
            ok,
        )

    for family, expected in data["naive_bounds"].items():
        case = get_case(family)
        computed = naive_bound(case)
        add(f"naive-bound-{family}", expected, computed, computed == Q(expected))

    pencils = data["sp4r_pencils"]
    m_lo, m_hi = 5, 100

    def family_mismatches(direction, keys):
        entry = pencils[direction]
        bad = []
        for m in range(m_lo, m_hi + 1):
            pt = sp4r_family(m, direction)
            for key in keys:
                got = getattr(pt, f"{key}_sq")
                want = _quad(entry[key], m)
                if got != want:
                    bad.append(f"m={m} {key}: {got} != {want}")
        return bad

    bad = family_mismatches("descending", ("good", "mid", "bad"))
    add(
        "sp4r-descending",
        f"three closed forms match for m={m_lo}..{m_hi}",
        "all match" if not bad else "; ".join(bad[:3]),
        not bad,
    )
    for key in ("good", "mid", "bad"):
        bad = family_mismatches("ascending", (key,))
        coeffs = pencils["ascending"][key]
        add(
            f"sp4r-ascending-{key}",
            f"{coeffs[0]}m^2{coeffs[1]:+d}m{coeffs[2]:+d} for m={m_lo}..{m_hi}",
            "all match" if not bad else "; ".join(bad[:3]),
            not bad,
        )

    bad = []
    for direction in ("descending", "ascending"):
        for m in range(m_lo, m_hi + 1):
            pt = sp4r_family(m, direction)
            if not pt.good_sq < pt.mid_sq < pt.bad_sq:
                bad.append(f"{direction} m={m}")
    add(
        "sp4r-orderings",
        f"good < member < bad for m={m_lo}..{m_hi}",
        "all strict" if not bad else "; ".join(bad[:3]),
        not bad,
    )

    verify_families = ["G", "FII", "EIV"]
    if long:
        verify_families += ["EI", "FI", "EII", "EVI", "EV"]
    for family in verify_families:
        case = get_case(family)
        rep = verify_box(case, jobs=jobs)
        add(
            f"verify-box-{family}",
            "0 violations",
            f"{len(rep.violations)} violations,"
            f" min margin {_fmt_q(rep.min_margin_sq)}"
            f" over {rep.filtered} filtered of {rep.scanned} scanned",
            rep.ok,
        )

    return items


def cmd_selftest(args) -> int:
    t0 = time.monotonic()
    items = run_selftest(long=args.long, jobs=args.jobs, log=print)
    failures = [item.name for item in items if not item.ok]
    print(f"{len(items)} items, {len(failures)} failed")
    for name in failures:
        print(f"  FAIL {name}")
    elapsed = 1000 * (time.monotonic() - t0)
    if args.report:
        _write_report(
            args.report,
            "-",
            "selftest",
            {"long": args.long, "jobs": args.jobs},
            {"items": [asdict(item) for item in items], "failures": len(failures)},
            elapsed,
        )
    return 1 if failures else 0


# ----------------------------------------------------------------- parser


def _add_case_argument(sp, with_n=True):
    sp.add_argument("case", help="case label (see list-cases)")
    if with_n:
        sp.add_argument(
            "--n",
            type=int,
            default=None,
            help="size parameter, required for the classical families",
        )


def _add_report_argument(sp):
    sp.add_argument(
        "--report",
        metavar="PATH",
        default=None,
        help="write a JSON report to PATH ('-' for standard output)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liecheck",
        description="exact-arithmetic checks for restricted root system data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("list-cases", help="summarize the case registry")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_list_cases)

    case_parser = sub.add_parser("case", help="inspect one case")
    case_sub = case_parser.add_subparsers(dest="case_command", required=True)
    sp = case_sub.add_parser("show", help="print the case data sheet")
    _add_case_argument(sp)
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_case_show)

    usmall_parser = sub.add_parser("usmall", help="unitarily small k-types")
    usmall_sub = usmall_parser.add_subparsers(dest="usmall_command", required=True)
    sp = usmall_sub.add_parser("count", help="count the u-small k-types")
    _add_case_argument(sp)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_usmall_count)
    sp = usmall_sub.add_parser(
        "dump", help="write every u-small k-type with its squared spin norm"
    )
    _add_case_argument(sp)
    sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_usmall_dump)

    sp = sub.add_parser("spin-norm", help="squared spin norm of one k-type")
    _add_case_argument(sp)
    sp.add_argument("--mu", required=True, help="k-type coordinates, e.g. 3,1")
    sp.add_argument(
        "--variants",
        action="store_true",
        help="also print the squared distance for every spin shift",
    )
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_spin_norm)

    sp = sub.add_parser("w1", help="minimal coset representatives")
    _add_case_argument(sp)
    sp.add_argument("--words", action="store_true", help="print the reduced words")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_w1)

    sp = sub.add_parser("bounds", help="step-margin lower bound tables")
    _add_case_argument(sp)
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="scan a box for step-margin violations")
    _add_case_argument(sp)
    sp.add_argument(
        "--box",
        default="default",
        help="'default' or explicit ranges like a:0..12,b:0..7",
    )
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.add_argument(
        "--long",
        action="store_true",
        help="confirm a multi-hour default box (EVIII, EIX)",
    )
    sp.add_argument(
        "--no-shortcut",
        action="store_true",
        help="evaluate every filtered k-type instead of skipping "
        "provably safe ones",
    )
    sp.add_argument(
        "--progress",
        action="store_true",
        help="print per-slice progress lines",
    )
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_verify)

    sp4r_parser = sub.add_parser("sp4r", help="rank-two symplectic extras")
    sp4r_sub = sp4r_parser.add_subparsers(dest="sp4r_command", required=True)
    sp = sp4r_sub.add_parser(
        "pencils", help="closed-form families with their squared spin norms"
    )
    sp.add_argument("--m-max", type=int, default=12, help="largest member index")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_sp4r_pencils)

    sp = sub.add_parser("selftest", help="recompute every tabulated constant")
    sp.add_argument(
        "--long",
        action="store_true",
        help="include the large counts and the bigger verify boxes",
    )
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_report_argument(sp)
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except UnknownCaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
