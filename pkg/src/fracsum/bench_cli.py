"""Command-line interface and reference-table reproduction harness.

Subcommands:

* ``run``        accelerate one problem and print the diagnostic table
* ``classify``   recover structural parameters from ratio coefficients
* ``reproduce``  recompute every frozen reference table and compare
* ``list``       show the builtin problem ids

Exit codes for ``reproduce``: 0 all rows pass, 1 any row fails,
2 no failures but some rows were skipped as precision-limited.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classify import RatioExpansion, convergence_verdict, structure_from_ratio
from .numerics import PRESETS, QUAD, Precision, make_context, resolve_scalar
from .reference_tables import REFERENCE_TABLES, ReferenceTable, parse_number
from .sampling import parse_schedule
from .series_model import (
    ProductProblem,
    builtin_ids,
    builtin_problem,
    load_problem,
    product_to_series,
)
from .transform import accelerate, estimate_errors

__all__ = ["RunConfig", "TableRow", "RunReport", "run", "reproduce_all", "ReproduceReport", "main"]


# ---------------------------------------------------------------------------
# Number formatting
# ---------------------------------------------------------------------------


def _sci(x, ctx, digits: int = 3) -> str:
    """Scientific notation with *digits* significant digits; exponent-safe."""
    if hasattr(x, "imag") and x.imag != 0:
        im = _sci(abs(x.imag), ctx, digits)
        return f"{_sci(x.real, ctx, digits)}{'+' if x.imag >= 0 else '-'}{im}i"
    x = x.real if hasattr(x, "real") else x
    if x == 0:
        return "0.00e+00"
    neg = x < 0
    ax = abs(x)
    e = int(ctx.floor(ctx.log10(ax)))
    mant = ax / ctx.power(10, e)
    if mant >= 10:
        mant, e = mant / 10, e + 1
    elif mant < 1:
        mant, e = mant * 10, e - 1
    q = round(float(mant), digits - 1)
    if q >= 10.0:
        q, e = q / 10.0, e + 1
    return f"{'-' if neg else ''}{q:.{digits - 1}f}e{e:+03d}"


def _full(x, ctx) -> str:
    """Full working-precision rendering of a value column."""
    if hasattr(x, "imag") and x.imag != 0:
        return f"{_full(x.real, ctx)} {'+' if x.imag >= 0 else '-'} {_full(abs(x.imag), ctx)}i"
    return ctx.nstr(x.real if hasattr(x, "real") else x, ctx.dps, strip_zeros=False)


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    problem: Optional[str] = None
    problem_file: Optional[str] = None
    schedule: Optional[str] = None
    depth: int = 32
    precision: str = "quad"
    fmt: str = "text"
    stride: int = 4


@dataclass
class TableRow:
    n: int
    R: int
    col3: str  # A_{R_n} or |A_{R_n} - S|
    col4: str  # A(0,n) or |A(0,n) - S|
    gamma: str
    lam: str


@dataclass
class RunReport:
    problem: str
    schedule: str
    depth: int
    precision: str
    has_S: bool
    rows: list
    summary: dict

    def _headers(self):
        if self.has_S:
            return ["n", "R_n", "|A_R-S|", "|A(0,n)-S|", "Gamma(0,n)", "Lambda(0,n)"]
        return ["n", "R_n", "A_R", "A(0,n)", "Gamma(0,n)", "Lambda(0,n)"]

    def text(self) -> str:
        headers = self._headers()
        cells = [headers] + [
            [str(r.n), str(r.R), r.col3, r.col4, r.gamma, r.lam] for r in self.rows
        ]
        widths = [max(len(row[i]) for row in cells) for i in range(6)]
        out = [f"# {self.problem}  schedule={self.schedule}  depth={self.depth}  precision={self.precision}"]
        for row in cells:
            out.append("  ".join(row[i].rjust(widths[i]) for i in range(6)))
        out.append("")
        for key, value in self.summary.items():
            out.append(f"{key}: {value}")
        return "\n".join(out) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self._headers())
        for r in self.rows:
            writer.writerow([r.n, r.R, r.col3, r.col4, r.gamma, r.lam])
        for key, value in self.summary.items():
            writer.writerow(["summary", key, value])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "problem": self.problem,
            "schedule": self.schedule,
            "depth": self.depth,
            "precision": self.precision,
            "columns": self._headers(),
            "rows": [[r.n, r.R, r.col3, r.col4, r.gamma, r.lam] for r in self.rows],
            "summary": self.summary,
        }
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return self.text()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def _resolve_problem(config: RunConfig):
    file_schedule = None
    if config.problem_file:
        problem, file_schedule = load_problem(config.problem_file)
    elif config.problem:
        problem = builtin_problem(config.problem)
    else:
        raise ValueError("no problem given: pass a builtin id or --problem-file")
    if config.schedule:
        schedule = parse_schedule(config.schedule)
    elif file_schedule is not None:
        schedule = file_schedule
    else:
        schedule = parse_schedule("aps:1,1")
    if isinstance(problem, ProductProblem):
        problem = product_to_series(problem)
    return problem, schedule


def run(config: RunConfig) -> RunReport:
    """Accelerate one problem and produce the rendered diagnostic table."""
    precision = PRESETS[config.precision]
    ctx = make_context(precision)
    problem, schedule = _resolve_problem(config)
    depth = config.depth

    if depth == 0:
        # degenerate single-row table: A(0,0) is the first fit ordinate
        result = accelerate(problem, schedule, 1, ctx)
        rows_src = estimate_errors(result.table, problem.known_S)[:1]
        best_n = 0
    else:
        result = accelerate(problem, schedule, depth, ctx)
        rows_src = estimate_errors(result.table, problem.known_S)
        best_n = result.best[1]

    has_S = problem.known_S is not None
    stride = max(1, config.stride)
    rows = []
    for row in rows_src:
        if row.n % stride and row.n != depth:
            continue
        if has_S:
            col3, col4 = _sci(row.sample_error, ctx), _sci(row.true_error, ctx)
        else:
            col3, col4 = _sci(row.sample, ctx), _full(row.value, ctx)
        rows.append(TableRow(row.n, row.R, col3, col4, _sci(row.gamma, ctx), _sci(row.lam, ctx)))

    best = rows_src[best_n]
    summary = {
        "best entry": f"A(0,{best.n}) using R_{best.n} = {best.R} terms",
        "value": _full(best.value, ctx),
        "est abs error": _sci(best.est_abs, ctx),
        "est rel error": _sci(best.est_rel, ctx),
    }
    if has_S:
        summary["true error"] = _sci(best.true_error, ctx)
    return RunReport(
        problem=problem.name,
        schedule=schedule.spec_string(),
        depth=depth,
        precision=precision.name,
        has_S=has_S,
        rows=rows,
        summary=summary,
    )


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

# Comparison policy.  Reference values carry 3 significant digits, and
# deep-diagonal entries are roundoff-noise dominated: every bound gets a
# noise floor proportional to Lambda * u at the active precision.
_RATIO = 5  # Gamma/Lambda and error columns must agree within this factor
_NOISE = 1000  # noise-floor multiplier on Lambda * u
_DISPLAY_REL = 0.007  # 3-significant-digit display rounding slack
_CUTOFF = 1e-13  # below-reference precisions skip rows beyond this estimate


@dataclass
class RowOutcome:
    n: int
    status: str  # pass | fail | precision-limited
    detail: str = ""


@dataclass
class TableOutcome:
    reference: ReferenceTable
    rows: list = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(1 for r in self.rows if r.status == status)


def _ratio_ok(ours, fix, ctx, floor=0):
    if abs(ours - fix) <= floor:
        return True
    if ours <= 0 or fix <= 0:
        return False
    ratio = ours / fix
    return 1 / _RATIO <= ratio <= _RATIO


def _compare_table(ref: ReferenceTable, precision: Precision) -> TableOutcome:
    ctx = make_context(precision)
    u = ctx.eps
    problem = builtin_problem(ref.problem)
    if isinstance(problem, ProductProblem):
        problem = product_to_series(problem)
    schedule = parse_schedule(ref.schedule)
    result = accelerate(problem, schedule, ref.depth, ctx)
    table = result.table
    S = resolve_scalar(problem.known_S, ctx)
    absS = abs(S) if S is not None else None

    outcome = TableOutcome(ref)
    limited = precision.mantissa_bits < QUAD.mantissa_bits
    for n, R, c3, c4, g, l in ref.rows:
        if table.R[n] != R:
            outcome.rows.append(RowOutcome(n, "fail", f"R_{n} = {table.R[n]}, expected {R}"))
            continue
        g_fix = parse_number(g, ctx)
        l_fix = parse_number(l, ctx)
        c3_fix = parse_number(c3, ctx)
        c4_fix = parse_number(c4, ctx)

        gam = table.gamma[0][n]
        lam = table.lam[0][n]
        lam_cmp = lam / absS if ref.relative else lam
        value = table.A[0][n]
        sample = table.samples[n]

        if limited:
            scale = absS if ref.has_S else abs(c4_fix)
            if ref.relative:
                scale = ctx.one
            est = max(g_fix * u, l_fix * u / scale if scale > 0 else ctx.inf)
            if est >= _CUTOFF:
                outcome.rows.append(
                    RowOutcome(n, "precision-limited", f"estimated error {_sci(est, ctx)}")
                )
                continue

        problems = []
        floor = _NOISE * l_fix * u
        if not _ratio_ok(gam, g_fix, ctx):
            problems.append(f"Gamma {_sci(gam, ctx)} vs {g}")
        if not _ratio_ok(lam_cmp, l_fix, ctx):
            problems.append(f"Lambda {_sci(lam_cmp, ctx)} vs {l}")
        if ref.has_S:
            e3 = abs(sample - S)
            e4 = abs(value - S)
            if ref.relative:
                e3, e4 = e3 / absS, e4 / absS
            floor3 = _NOISE * u * (1 if ref.relative else absS)
            if not _ratio_ok(e3, c3_fix, ctx, floor=floor3):
                problems.append(f"partial-sum error {_sci(e3, ctx)} vs {c3}")
            if not e4 <= max(_RATIO * c4_fix, floor):
                problems.append(f"error {_sci(e4, ctx)} vs {c4}")
        else:
            if not abs(sample - c3_fix) <= _DISPLAY_REL * abs(c3_fix):
                problems.append(f"A_R {_sci(sample, ctx)} vs {c3}")
            if not abs(value - c4_fix) <= max(floor, 1e-25 * abs(c4_fix)):
                problems.append(f"value {ctx.nstr(value, 20)} vs {c4}")
        if problems:
            outcome.rows.append(RowOutcome(n, "fail", "; ".join(problems)))
        else:
            outcome.rows.append(RowOutcome(n, "pass"))
    return outcome


@dataclass
class ReproduceReport:
    precision: str
    outcomes: list

    @property
    def exit_code(self) -> int:
        if any(o.count("fail") for o in self.outcomes):
            return 1
        if any(o.count("precision-limited") for o in self.outcomes):
            return 2
        return 0

    def text(self) -> str:
        out = [f"# reference-table reproduction at precision={self.precision}"]
        for o in self.outcomes:
            ref = o.reference
            failed = o.count("fail")
            skipped = o.count("precision-limited")
            status = "FAIL" if failed else "pass"
            out.append(
                f"[{status}] {ref.problem:<7} {ref.schedule:<9} rows={len(o.rows)} "
                f"pass={o.count('pass')} fail={failed} precision-limited={skipped}"
            )
            for row in o.rows:
                if row.status == "fail":
                    out.append(f"    row n={row.n}: {row.detail}")
        checked = sum(o.count("pass") + o.count("fail") for o in self.outcomes)
        skipped = sum(o.count("precision-limited") for o in self.outcomes)
        failed = sum(o.count("fail") for o in self.outcomes)
        out.append(
            f"total: {len(self.outcomes)} tables, {checked} rows checked, "
            f"{failed} failed, {skipped} precision-limited"
        )
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {
            "precision": self.precision,
            "exit_code": self.exit_code,
            "tables": [
                {
                    "problem": o.reference.problem,
                    "schedule": o.reference.schedule,
                    "rows": [
                        {"n": r.n, "status": r.status, "detail": r.detail} for r in o.rows
                    ],
                }
                for o in self.outcomes
            ],
        }
        return json.dumps(doc, indent=2) + "\n"


def reproduce_all(precision: Precision = QUAD, only: Optional[str] = None) -> ReproduceReport:
    """Recompute every reference table and compare row by row."""
    outcomes = []
    for ref in REFERENCE_TABLES:
        if only and ref.problem != only:
            continue
        outcomes.append(_compare_table(ref, precision))
    if not outcomes:
        raise ValueError(f"no reference tables for {only!r}")
    return ReproduceReport(precision=precision.name, outcomes=outcomes)


# ---------------------------------------------------------------------------
# classify subcommand helpers
# ---------------------------------------------------------------------------


def _parse_coefficient(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return complex(text)


def _classify_text(m: int, mu: Fraction, coeffs, zero_tol: float) -> str:
    ratio = RatioExpansion(mu=mu, m=m, c=tuple(coeffs))
    ctx = make_context(QUAD)
    sp = structure_from_ratio(ratio, ctx=ctx, zero_tol=zero_tol)
    verdict = convergence_verdict(sp, ratio.s, zero_tol=zero_tol)
    out = [
        f"mu      = {sp.mu}",
        f"zeta    = {sp.zeta}",
        f"theta   = ({', '.join(str(t) for t in sp.theta)})",
        f"gamma   = {sp.gamma}",
        f"sigma   = {sp.sigma}  (q = {sp.q})",
        f"verdict = {verdict.kind}: {verdict.condition}",
    ]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsum",
        description="Convergence acceleration for series and products whose "
        "terms expand in fractional powers of n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="accelerate one problem and print its table")
    run_p.add_argument("problem", nargs="?", help="builtin problem id (see 'fracsum list')")
    run_p.add_argument("--problem-file", help="JSON problem definition file")
    run_p.add_argument("--schedule", help="aps:KAPPA,ETA | gps:TAU | list:1,2,4,...")
    run_p.add_argument("--depth", type=int, default=32)
    run_p.add_argument("--precision", choices=sorted(PRESETS), default="quad")
    run_p.add_argument("--format", dest="fmt", choices=["text", "csv", "json"], default="text")
    run_p.add_argument("--stride", type=int, default=4, help="print every stride-th row")

    cls_p = sub.add_parser("classify", help="structural parameters from ratio coefficients")
    cls_p.add_argument("--m", type=int, required=True)
    cls_p.add_argument("--mu", default="0", help="exponent s/m of the ratio expansion")
    cls_p.add_argument("--c", required=True, help="comma-separated c_0..c_m (rationals or complex)")
    cls_p.add_argument("--zero-tol", type=float, default=0.0)

    rep_p = sub.add_parser("reproduce", help="recompute and check the reference tables")
    rep_p.add_argument("--only", help="restrict to one problem id")
    rep_p.add_argument("--precision", choices=sorted(PRESETS), default="quad")
    rep_p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")

    sub.add_parser("list", help="list builtin problem ids")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = RunConfig(
                problem=args.problem,
                problem_file=args.problem_file,
                schedule=args.schedule,
                depth=args.depth,
                precision=args.precision,
                fmt=args.fmt,
                stride=args.stride,
            )
            sys.stdout.write(run(config).render(args.fmt))
            return 0
        if args.command == "classify":
            coeffs = [_parse_coefficient(c) for c in args.c.split(",")]
            mu = Fraction(args.mu)
            sys.stdout.write(_classify_text(args.m, mu, coeffs, args.zero_tol))
            return 0
        if args.command == "reproduce":
            report = reproduce_all(PRESETS[args.precision], only=args.only)
            sys.stdout.write(report.to_json() if args.fmt == "json" else report.text())
            return report.exit_code
        if args.command == "list":
            for ident in builtin_ids():
                problem = builtin_problem(ident)
                describe = getattr(problem, "meta", {}).get("describe", "") or getattr(
                    problem, "name", ""
                )
                if isinstance(problem, ProductProblem):
                    describe = f"product, m={problem.m}, t={problem.t}"
                sys.stdout.write(f"{ident:<8} {describe}\n")
            return 0
    except (ValueError, KeyError, ArithmeticError, OSError) as exc:
        sys.stderr.write(f"fracsum: error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
