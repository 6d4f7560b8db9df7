"""Command line front end.

Subcommands map one-to-one onto the library layers:

- scan              staged sufficient-condition scan over a q interval
- settle-prime-counts  the exact-rational settling routine and its cutoff
- verify-translate  exhaustive translate-property verification
- verify-line       exhaustive line-property verification
- oracle            character-sum consistency surveys for small q
- reproduce-all     one-shot driver running every phase with expectations

Data subcommands emit rows with a fixed schema (CSV with leading
`# summary:` comment lines, or a JSON object with `rows` and `summary`).
Exit status is 0 on success, 1 when an expectation or agreement check
fails, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Callable

from .arith import ctx_for_prime_power, factorize, is_prime
from .charoracle import ORACLE_Q_CAP, survey_line_identities, survey_translate_sums
from .criteria import (
    SCAN_EXCEPTIONS,
    Stage,
    prime_count_cutoff,
    scan_interval,
    settle_prime_count_range,
)
from .ffield import build_field
from .verify import (
    LINE_EXCEPTIONS,
    TRANSLATE_EXCEPTIONS,
    PropertyReport,
    verify_line_fast,
    verify_line_reference,
    verify_translate_fast,
    verify_translate_reference,
)

ROW_FIELDS = ("q", "p", "k", "command", "result", "detail", "elapsed_ms")

# Facts the scan over the full interval [3, 2**20] must reproduce.
FULL_SCAN_LO = 3
FULL_SCAN_HI = 1 << 20
FULL_SCAN_TOTAL = 82247
FULL_SCAN_BASIC_FAILURES = 2425
FULL_SCAN_LARGEST_BASIC_FAILURE = 1044889
FULL_SCAN_EXCEPTION_COUNT = 101


def _p_k_of(q: int) -> tuple[int, int]:
    if is_prime(q):
        return q, 1
    return factorize(q).factors[0]


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    return f"{x:.6g}"


def _fmt_elem(u: tuple) -> str:
    return ".".join(str(c) for c in u)


def _fmt_witness(report: PropertyReport) -> str:
    if report.witness is None:
        return ""
    if report.prop == "line":
        gamma, key = report.witness
        return f"gamma={_fmt_elem(gamma)}|key={_fmt_elem(key)}"
    return f"key={_fmt_elem(report.witness)}"


def _row(q, p, k, command: str, result: str, detail: str,
         elapsed_ms: float) -> dict:
    return {"q": q, "p": p, "k": k, "command": command, "result": result,
            "detail": detail, "elapsed_ms": round(elapsed_ms, 3)}


def _emit(args, rows: list[dict], summary: dict) -> None:
    if args.stable_output:
        for row in rows:
            row["elapsed_ms"] = 0
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    try:
        if args.format == "json":
            json.dump({"rows": rows, "summary": summary}, out, indent=2,
                      default=str)
            out.write("\n")
        else:
            for key in sorted(summary):
                out.write(f"# summary: {key}={summary[key]}\n")
            writer = csv.DictWriter(out, fieldnames=ROW_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def _progress(args, message: str) -> None:
    if getattr(args, "progress", False):
        print(message, file=sys.stderr, flush=True)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    if not 3 <= lo <= hi:
        raise argparse.ArgumentTypeError("range must satisfy 3 <= LO <= HI")
    return lo, hi


def _parse_q_list(text: str) -> list[int]:
    if text.strip() == "exceptions":
        return sorted(SCAN_EXCEPTIONS)
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("q list must be comma-separated integers")
    if not values:
        raise argparse.ArgumentTypeError("q list is empty")
    for q in values:
        try:
            ctx_for_prime_power(q)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
        if q % 2 == 0:
            raise argparse.ArgumentTypeError(f"{q} is even")
    return values


# -- scan -------------------------------------------------------------------


def _scan_rows(lo: int, hi: int, workers: int,
               args) -> tuple[list[dict], dict, list[int]]:
    rows: list[dict] = []
    counts = {stage: 0 for stage in Stage}
    largest_basic_failure = 0
    exceptions: list[int] = []
    span = hi - lo + 1
    block = max(1, span // 16)
    start = lo
    while start <= hi:
        end = min(start + block - 1, hi)
        for verdict in scan_interval(start, end, workers=workers):
            counts[verdict.stage] += 1
            if verdict.stage is not Stage.BASIC_PASS:
                largest_basic_failure = max(largest_basic_failure, verdict.q)
            if verdict.stage is Stage.EXCEPTION:
                exceptions.append(verdict.q)
            p, k = _p_k_of(verdict.q)
            rows.append(_row(verdict.q, p, k, "scan", verdict.stage.value,
                             _fmt_float(verdict.margin), 0.0))
        _progress(args, f"scan: finished q <= {end} ({len(rows)} prime powers)")
        start = end + 1
    total = len(rows)
    summary = {
        "total": total,
        "basic_pass": counts[Stage.BASIC_PASS],
        "basic_failures": total - counts[Stage.BASIC_PASS],
        "sieve_pass": counts[Stage.SIEVE_PASS],
        "exceptions": counts[Stage.EXCEPTION],
        "eliminated_by_prime_count": counts[Stage.ELIMINATED_BY_PRIME_COUNT],
        "largest_basic_failure": largest_basic_failure,
        "largest_exception": max(exceptions) if exceptions else 0,
    }
    return rows, summary, exceptions


def _scan_expectation_failures(lo: int, hi: int, summary: dict,
                               exceptions: list[int]) -> list[str]:
    problems = []
    expected_exc = sorted(q for q in SCAN_EXCEPTIONS if lo <= q <= hi)
    if exceptions != expected_exc:
        missing = sorted(set(expected_exc) - set(exceptions))
        extra = sorted(set(exceptions) - set(expected_exc))
        problems.append(f"exception set mismatch (missing={missing}, extra={extra})")
    if (lo, hi) == (FULL_SCAN_LO, FULL_SCAN_HI):
        checks = (
            ("total", FULL_SCAN_TOTAL),
            ("basic_failures", FULL_SCAN_BASIC_FAILURES),
            ("largest_basic_failure", FULL_SCAN_LARGEST_BASIC_FAILURE),
            ("exceptions", FULL_SCAN_EXCEPTION_COUNT),
        )
        for key, expected in checks:
            if summary[key] != expected:
                problems.append(f"{key}={summary[key]}, expected {expected}")
    return problems


def _cmd_scan(args) -> int:
    lo, hi = args.range
    rows, summary, exceptions = _scan_rows(lo, hi, args.threads, args)
    failures: list[str] = []
    if args.expect_known:
        failures = _scan_expectation_failures(lo, hi, summary, exceptions)
    summary["expect_failures"] = len(failures)
    _emit(args, rows, summary)
    for problem in failures:
        print(f"expectation failed: {problem}", file=sys.stderr)
    return 1 if failures else 0


# -- settle-prime-counts -----------------------------------------------------


def _cmd_settle(args) -> int:
    rows = []
    cutoff = prime_count_cutoff()
    rows.append(_row("", "", "", "prime-count-cutoff", str(cutoff), "", 0.0))
    for t1, t2 in args.pairs:
        settled = settle_prime_count_range(t1, t2)
        rows.append(_row("", "", "", "settle-prime-counts",
                         "settled" if settled else "unsettled",
                         f"t1={t1}|t2={t2}", 0.0))
    summary = {"cutoff": cutoff, "pairs": len(args.pairs)}
    _emit(args, rows, summary)
    return 0


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        t1_s, t2_s = text.split(":", 1)
        t1, t2 = int(t1_s), int(t2_s)
    except ValueError:
        raise argparse.ArgumentTypeError("pair must look like T1:T2")
    if not 1 <= t1 <= t2:
        raise argparse.ArgumentTypeError("pair must satisfy 1 <= T1 <= T2")
    return t1, t2


# -- verify ------------------------------------------------------------------


def _verify_once(q: int, prop: str, mode: str, workers: int) -> list[PropertyReport]:
    fld = build_field(ctx_for_prime_power(q))
    reports = []
    if prop == "translate":
        if mode in ("reference", "both"):
            reports.append(("reference", verify_translate_reference(fld)))
        if mode in ("fast", "both"):
            reports.append(("fast", verify_translate_fast(fld)))
    else:
        if mode in ("reference", "both"):
            reports.append(("reference", verify_line_reference(fld)))
        if mode in ("fast", "both"):
            reports.append(("fast", verify_line_fast(fld, workers=workers)))
    return reports


def _cmd_verify(args, prop: str, exceptions: frozenset[int]) -> int:
    rows: list[dict] = []
    failures: list[str] = []
    holds_count = 0
    fails_count = 0
    for q in args.q_list:
        reports = _verify_once(q, prop, args.mode, args.threads)
        for flavor, report in reports:
            p, k = _p_k_of(q)
            rows.append(_row(q, p, k, f"verify-{prop}:{flavor}",
                             "holds" if report.holds else "fails",
                             _fmt_witness(report), report.elapsed * 1000.0))
        outcomes = {report.holds for _, report in reports}
        if len(outcomes) != 1:
            failures.append(f"q={q}: reference and fast verifiers disagree")
            continue
        holds = outcomes.pop()
        holds_count += holds
        fails_count += not holds
        if args.expect_known and holds != (q not in exceptions):
            expected = "fail" if q in exceptions else "hold"
            failures.append(f"q={q}: property was expected to {expected}")
        _progress(args, f"verify-{prop}: q={q} "
                        f"{'holds' if holds else 'fails'}")
    summary = {"checked": len(args.q_list), "holds": holds_count,
               "fails": fails_count, "expect_failures": len(failures)}
    _emit(args, rows, summary)
    for problem in failures:
        print(f"expectation failed: {problem}", file=sys.stderr)
    return 1 if failures else 0


# -- oracle ------------------------------------------------------------------


def _cmd_oracle(args) -> int:
    rows: list[dict] = []
    failures: list[str] = []
    for q in args.q_list:
        if q > ORACLE_Q_CAP:
            raise SystemExit(f"oracle supports q <= {ORACLE_Q_CAP}, got {q}")
        fld = build_field(ctx_for_prime_power(q))
        p, k = fld.p, fld.k
        sums = survey_translate_sums(fld, tol=args.tol_sums)
        rows.append(_row(q, p, k, "oracle:translate-sums",
                         "ok" if sums.ok else "fail",
                         f"max_dev={_fmt_float(sums.max_deviation)}", 0.0))
        if not sums.ok:
            failures.append(f"q={q}: translate sums deviate by "
                            f"{sums.max_deviation:.3g}")
        ident = survey_line_identities(fld, tol=args.tol_identity)
        rows.append(_row(q, p, k, "oracle:line-identity",
                         "ok" if ident.ok else "fail",
                         f"max_dev={_fmt_float(ident.max_deviation)}", 0.0))
        if not ident.ok:
            failures.append(f"q={q}: line-count identity deviates by "
                            f"{ident.max_deviation:.3g}")
        _progress(args, f"oracle: q={q} done")
    summary = {"checked": len(args.q_list), "expect_failures": len(failures)}
    _emit(args, rows, summary)
    for problem in failures:
        print(f"oracle check failed: {problem}", file=sys.stderr)
    return 1 if failures else 0


# -- reproduce-all -----------------------------------------------------------


def _cmd_reproduce(args) -> int:
    ok = True

    def phase(name: str, good: bool, detail: str) -> None:
        nonlocal ok
        ok = ok and good
        print(f"{name}: {'ok' if good else 'FAIL'} ({detail})", flush=True)

    lo, hi = FULL_SCAN_LO, args.scan_hi
    rows, summary, exceptions = _scan_rows(lo, hi, args.threads, args)
    problems = _scan_expectation_failures(lo, hi, summary, exceptions)
    phase("scan", not problems,
          f"{summary['total']} prime powers, {summary['exceptions']} exceptions"
          + ("" if not problems else "; " + "; ".join(problems)))

    cutoff = prime_count_cutoff()
    settle_ok = (cutoff == 14
                 and settle_prime_count_range(11, 13)
                 and settle_prime_count_range(10, 10)
                 and not settle_prime_count_range(2, 2))
    phase("settle-prime-counts", settle_ok, f"cutoff={cutoff}")

    translate_qs = [q for q in sorted(SCAN_EXCEPTIONS) if q <= args.translate_max]
    bad = []
    for q in translate_qs:
        fld = build_field(ctx_for_prime_power(q))
        report = verify_translate_fast(fld)
        if report.holds != (q not in TRANSLATE_EXCEPTIONS):
            bad.append(q)
        _progress(args, f"translate: q={q} {'holds' if report.holds else 'fails'}")
    phase("verify-translate", not bad,
          f"{len(translate_qs)} candidates" + ("" if not bad else f"; wrong at {bad}"))

    line_qs = [q for q in sorted(SCAN_EXCEPTIONS) if q <= args.line_max]
    bad = []
    for q in line_qs:
        fld = build_field(ctx_for_prime_power(q))
        report = verify_line_fast(fld, workers=args.threads)
        if report.holds != (q not in LINE_EXCEPTIONS):
            bad.append(q)
        _progress(args, f"line: q={q} {'holds' if report.holds else 'fails'}")
    phase("verify-line", not bad,
          f"{len(line_qs)} candidates" + ("" if not bad else f"; wrong at {bad}"))

    bad = []
    for q in (5, 7, 9, 11, 13):
        fld = build_field(ctx_for_prime_power(q))
        if not survey_translate_sums(fld).ok:
            bad.append(q)
    for q in (7, 11, 13):
        fld = build_field(ctx_for_prime_power(q))
        if not survey_line_identities(fld).ok:
            bad.append(q)
    phase("oracle", not bad, "sums q=5..13, identities q=7,11,13"
          + ("" if not bad else f"; wrong at {bad}"))

    print(f"reproduce-all: {'PASS' if ok else 'FAIL'}", flush=True)
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadprim",
        description="Verification pipeline for 2-primitive elements in "
                    "quadratic extensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default="-",
                        help="output file, '-' for stdout (default)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for parallel stages")
    common.add_argument("--stable-output", action="store_true",
                        help="zero all elapsed fields for reproducible bytes")
    common.add_argument("--progress", action="store_true",
                        help="progress notes on stderr")

    p_scan = sub.add_parser("scan", parents=[common],
                            help="staged criteria over a q interval")
    p_scan.add_argument("--range", type=_parse_range,
                        default=(FULL_SCAN_LO, FULL_SCAN_HI),
                        help="interval LO:HI (default 3:1048576)")
    p_scan.add_argument("--expect-known", action="store_true",
                        help="fail unless the known scan facts are reproduced")
    p_scan.set_defaults(handler=_cmd_scan)

    p_settle = sub.add_parser("settle-prime-counts", parents=[common],
                              help="exact-rational prime-count settling")
    p_settle.add_argument("pairs", nargs="*", type=_parse_pair,
                          default=[(11, 13), (10, 10), (2, 2)],
                          help="T1:T2 pairs (default: 11:13 10:10 2:2)")
    p_settle.set_defaults(handler=_cmd_settle)

    for prop, exceptions in (("translate", TRANSLATE_EXCEPTIONS),
                             ("line", LINE_EXCEPTIONS)):
        p_v = sub.add_parser(f"verify-{prop}", parents=[common],
                             help=f"exhaustive {prop}-property verification")
        p_v.add_argument("--q-list", type=_parse_q_list, required=True,
                         help="comma-separated odd prime powers, or 'exceptions'")
        p_v.add_argument("--mode", choices=("reference", "fast", "both"),
                         default="fast")
        p_v.add_argument("--expect-known", action="store_true",
                         help="fail unless verdicts match the known failure sets")
        p_v.set_defaults(handler=_cmd_verify, prop=prop, known=exceptions)

    p_oracle = sub.add_parser("oracle", parents=[common],
                              help="character-sum surveys for small q")
    p_oracle.add_argument("--q-list", type=_parse_q_list, required=True)
    p_oracle.add_argument("--tol-sums", type=float, default=1e-6)
    p_oracle.add_argument("--tol-identity", type=float, default=1e-3)
    p_oracle.set_defaults(handler=_cmd_oracle)

    p_all = sub.add_parser("reproduce-all", parents=[common],
                           help="run every phase with known expectations")
    p_all.add_argument("--scan-hi", type=int, default=FULL_SCAN_HI)
    p_all.add_argument("--translate-max", type=int, default=3541)
    p_all.add_argument("--line-max", type=int, default=3541)
    p_all.set_defaults(handler=_cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler: Callable = args.handler
    if handler is _cmd_verify:
        return handler(args, args.prop, args.known)
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
