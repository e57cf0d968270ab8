"""User-facing acceleration driver.

Orchestrates schedule generation, partial-sum accumulation and the
W-algorithm, and selects a recommended answer from the j = 0 diagonal
using the stability indicators.  Works for series and, through the
product adapter, for infinite products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .numerics import resolve_scalar
from .sampling import Schedule
from .series_model import ProductProblem, SeriesProblem, product_to_series, sums_and_terms
from .w_algorithm import ExtrapolationTable, build_table

__all__ = [
    "AccelerationResult",
    "DiagnosticsRow",
    "accelerate",
    "accelerate_product",
    "sum_trig",
    "estimate_errors",
]


@dataclass
class AccelerationResult:
    """Outcome of one acceleration run.

    ``value`` is the entry at ``best = (j, n)``; ``est_abs_error`` and
    ``est_rel_error`` are the stability-based estimates Lambda*u and
    Lambda*u/|value| there.  ``stability_curve`` lists
    (n, Gamma(0,n), Lambda(0,n)) and ``scores`` the per-n selection
    metric actually minimized (see ``_selection_scores``).
    """

    table: ExtrapolationTable
    best: tuple
    value: object
    est_abs_error: object
    est_rel_error: object
    stability_curve: list
    scores: list


def _selection_scores(table: ExtrapolationTable):
    """Per-n combined error metric used to pick the best diagonal entry.

    The stability part is max(Gamma*u, Lambda*u/|A|), the attainable
    relative accuracy at entry n.  On its own it is useless early in the
    diagonal (it is smallest at n = 0, where nothing has converged yet),
    so it is combined with the realized convergence signal
    |A_n - A_{n-1}|/|A_n|; the score bottoms out at the instability
    onset, after which added terms stop helping.  This selection rule is
    a heuristic of this implementation, not part of the algorithm.
    """
    ctx = table.ctx
    u = ctx.eps
    scores = []
    prev = None
    for n in range(table.depth + 1):
        a = table.A[0][n]
        absa = abs(a)
        stab = table.gamma[0][n] * u
        if absa > 0:
            lam_rel = table.lam[0][n] * u / absa
            if lam_rel > stab:
                stab = lam_rel
        elif table.lam[0][n] > 0:
            stab = ctx.inf
        if n == 0:
            conv = ctx.one  # no convergence evidence yet: claim no digits
        elif absa > 0:
            conv = abs(a - prev) / absa
        else:
            conv = ctx.inf
        scores.append(max(stab, conv))
        prev = a
    return scores


def _select(table: ExtrapolationTable) -> AccelerationResult:
    ctx = table.ctx
    u = ctx.eps
    scores = _selection_scores(table)
    best_n = 0
    for n, s in enumerate(scores):
        if s <= scores[best_n]:  # ties resolve to the deeper entry
            best_n = n
    value = table.A[0][best_n]
    est_abs = table.lam[0][best_n] * u
    absv = abs(value)
    est_rel = est_abs / absv if absv > 0 else ctx.inf
    curve = [(n, table.gamma[0][n], table.lam[0][n]) for n in range(table.depth + 1)]
    return AccelerationResult(
        table=table,
        best=(0, best_n),
        value=value,
        est_abs_error=est_abs,
        est_rel_error=est_rel,
        stability_curve=curve,
        scores=scores,
    )


def accelerate(problem: SeriesProblem, schedule: Schedule, depth: int, ctx) -> AccelerationResult:
    """Accelerate a series up to diagonal entry A(0, depth)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    R = schedule.prefix(depth + 1)
    sums, terms = sums_and_terms(problem, R[-1], ctx)
    table = build_table(
        [ctx.zero] + sums, [None] + terms, schedule, problem.m, problem.sigma_hat, depth, ctx
    )
    return _select(table)


def accelerate_product(problem: ProductProblem, schedule: Schedule, depth: int, ctx) -> AccelerationResult:
    """Accelerate an infinite product via its partial-product series."""
    return accelerate(product_to_series(problem), schedule, depth, ctx)


def sum_trig(pair, schedule: Schedule, depth: int, ctx):
    """Cosine and sine sums (S_c, S_s) from a ``trig_series_pair``.

    For real h one acceleration of the '+' problem suffices and
    (S_c, S_s) = (Re, Im) of its value; otherwise both problems are
    accelerated and combined as (S+ + S-)/2 and (S+ - S-)/(2i).
    """
    plus, minus = pair
    if plus.meta.get("h_is_real"):
        value = accelerate(plus, schedule, depth, ctx).value
        return value.real, value.imag
    sp = accelerate(plus, schedule, depth, ctx).value
    sm = accelerate(minus, schedule, depth, ctx).value
    return (sp + sm) / 2, (sp - sm) / (2 * ctx.mpc(0, 1))


@dataclass
class DiagnosticsRow:
    """Per-entry diagnostics along the j = 0 diagonal."""

    n: int
    R: int
    sample: object
    value: object
    gamma: object
    lam: object
    est_gamma: object  # Gamma * u: attainable relative accuracy, convergent case
    est_abs: object  # Lambda * u
    est_rel: object  # Lambda * u / |value|
    sample_error: Optional[object] = None  # |A_{R_n} - S|, when S is known
    true_error: Optional[object] = None  # |A(0,n) - S|, when S is known


def estimate_errors(table: ExtrapolationTable, known_S=None) -> list:
    """Diagnostics rows for the j = 0 diagonal.

    When ``known_S`` is given the true errors are included; they are
    reporting-only and never feed back into entry selection.
    """
    ctx = table.ctx
    u = ctx.eps
    S = resolve_scalar(known_S, ctx)
    rows = []
    for n, R_n, sample, value, gam, lam in table.diagonal(0):
        absv = abs(value)
        rows.append(
            DiagnosticsRow(
                n=n,
                R=R_n,
                sample=sample,
                value=value,
                gamma=gam,
                lam=lam,
                est_gamma=gam * u,
                est_abs=lam * u,
                est_rel=lam * u / absv if absv > 0 else ctx.inf,
                sample_error=abs(sample - S) if S is not None else None,
                true_error=abs(value - S) if S is not None else None,
            )
        )
    return rows
