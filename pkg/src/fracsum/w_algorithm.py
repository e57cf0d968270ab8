"""The recursive W-algorithm and its dense linear-system oracle.

``build_table`` computes the extrapolation triangle A(j,n) together with
the stability indicators Gamma(j,n) and Lambda(j,n) from four auxiliary
divided-difference arrays (M, N, H, K), using only the terms a_n and
partial sums A_n of the series.  ``dense_oracle`` solves the defining
(n+1)x(n+1) linear system directly by pivoted elimination and exposes
the weights gamma_{n,i}; it exists to cross-check the recursion and to
support the general-offset (alpha != 0) variant of the fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import check_range, precision_of

__all__ = [
    "ZeroTermError",
    "SingularSystemError",
    "ExtrapolationTable",
    "DenseSolve",
    "build_table",
    "dense_oracle",
    "gamma_from_weights",
    "lambda_from_weights",
]


class ZeroTermError(ValueError):
    """A term at a scheduled index vanished; its remainder weight is undefined."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"term a_{index} at a scheduled index is zero")


class SingularSystemError(ArithmeticError):
    """The dense extrapolation system is numerically singular."""

    def __init__(self, message, condition_estimate):
        self.condition_estimate = condition_estimate
        super().__init__(f"{message} (condition estimate {condition_estimate})")


@dataclass
class ExtrapolationTable:
    """Triangular extrapolation table with stability indicators.

    ``A[j][n]`` is the entry at column j, diagonal index n (j + n <= depth);
    ``gamma`` and ``lam`` hold Gamma(j,n) >= 1 and Lambda(j,n) >= 0 at the
    same indices.  ``samples[l]`` is the fit ordinate at R_l: the partial
    sum A_{R_l} for sigma_hat >= 0, or A_{R_l - 1} for sigma_hat < 0.
    The full triangle (including the internal M, N, H, K arrays) is
    retained; at the depths used here (<= 64) the memory cost is trivial.
    """

    m: int
    sigma_hat: Fraction
    schedule: object
    depth: int
    ctx: object
    R: list
    samples: list
    A: list
    gamma: list
    lam: list
    M: list
    N: list
    H: list
    K: list

    def diagonal(self, j: int = 0):
        """Rows (n, R_n, sample_n, A(j,n), Gamma(j,n), Lambda(j,n)) along column j."""
        rows = []
        for n in range(self.depth + 1 - j):
            rows.append(
                (n, self.R[j + n], self.samples[j + n], self.A[j][n], self.gamma[j][n], self.lam[j][n])
            )
        return rows


def _omega(r: int, a, sigma_hat: Fraction, ctx):
    if sigma_hat == 1:
        return ctx.mpf(r) * a
    if sigma_hat == 0:
        return ctx.mpf(1) * a
    return ctx.power(r, ctx.convert(sigma_hat)) * a


def build_table(sums, terms, schedule, m, sigma_hat, depth, ctx) -> ExtrapolationTable:
    """Run the W-algorithm recursion up to j + n <= depth.

    ``sums[k]`` must hold A_k for 0 <= k <= R_depth (A_0 = 0) and
    ``terms[k]`` must hold a_k for 1 <= k <= R_depth.  The recursion
    implements the alpha = 0 fit only; sigma_hat < 0 switches the fit
    ordinates from A_{R_l} to A_{R_l - 1}.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    sigma_hat = Fraction(sigma_hat)
    R = schedule.prefix(depth + 1)
    if R[-1] >= len(sums) or R[-1] >= len(terms):
        raise ValueError(f"need sums and terms up to index R_depth = {R[-1]}")
    prec = precision_of(ctx)
    use_prev = sigma_hat < 0

    size = depth + 1
    M = [[None] * (size - j) for j in range(size)]
    N = [[None] * (size - j) for j in range(size)]
    H = [[None] * (size - j) for j in range(size)]
    K = [[None] * (size - j) for j in range(size)]
    A = [[None] * (size - j) for j in range(size)]
    G = [[None] * (size - j) for j in range(size)]
    L = [[None] * (size - j) for j in range(size)]

    inv_m = ctx.convert(Fraction(-1, m))
    t = [ctx.power(r, inv_m) for r in R]

    samples = []
    for j, r in enumerate(R):
        a = terms[r]
        if a == 0:
            raise ZeroTermError(r)
        omega = _omega(r, a, sigma_hat, ctx)
        sample = sums[r - 1] if use_prev else sums[r]
        samples.append(sample)
        M[j][0] = sample / omega
        N[j][0] = 1 / omega
        sign = -1 if j % 2 else 1
        H[j][0] = sign * abs(N[j][0])
        K[j][0] = sign * abs(M[j][0])
        A[j][0] = sample  # exact: the n = 0 entry is the fit ordinate itself
        G[j][0] = ctx.one
        L[j][0] = abs(sample)

    for n in range(1, size):
        for j in range(size - n):
            den = t[j + n] - t[j]
            M[j][n] = (M[j + 1][n - 1] - M[j][n - 1]) / den
            N[j][n] = (N[j + 1][n - 1] - N[j][n - 1]) / den
            H[j][n] = (H[j + 1][n - 1] - H[j][n - 1]) / den
            K[j][n] = (K[j + 1][n - 1] - K[j][n - 1]) / den
            if prec is not None:
                check_range(M[j][n], ctx, prec, f"M({j},{n})")
                check_range(N[j][n], ctx, prec, f"N({j},{n})")
            A[j][n] = M[j][n] / N[j][n]
            G[j][n] = abs(H[j][n] / N[j][n])
            L[j][n] = abs(K[j][n] / N[j][n])

    return ExtrapolationTable(
        m=m,
        sigma_hat=sigma_hat,
        schedule=schedule,
        depth=depth,
        ctx=ctx,
        R=R,
        samples=samples,
        A=A,
        gamma=G,
        lam=L,
        M=M,
        N=N,
        H=H,
        K=K,
    )


@dataclass
class DenseSolve:
    """Direct solution of the (n+1)x(n+1) extrapolation system.

    ``value`` approximates the limit; ``betas`` are the auxiliary
    unknowns; ``weights[i]`` is the coefficient gamma_{n,i} of the fit
    ordinate ``samples[i]`` in ``value`` (they sum to 1).
    """

    j: int
    n: int
    alpha: object
    sigma_hat: Fraction
    value: object
    betas: list
    weights: list
    samples: list


def dense_oracle(sums, terms, schedule, m, sigma_hat, alpha, j, n, ctx) -> DenseSolve:
    """Solve the defining linear system for the (j, n) entry directly.

    Supports a general offset alpha > -R_0 in the fit basis
    (R_l + alpha)^(-i/m); the recursion corresponds to alpha = 0.
    """
    if n < 0 or j < 0:
        raise ValueError("j and n must be nonnegative")
    sigma_hat = Fraction(sigma_hat)
    R = schedule.prefix(j + n + 1)[j:]
    alpha = ctx.convert(alpha)
    if not alpha > -R[0]:
        raise ValueError("alpha must exceed -R_0")
    use_prev = sigma_hat < 0
    inv_m = ctx.convert(Fraction(-1, m))

    size = n + 1
    mat = ctx.matrix(size, size)
    rhs = ctx.matrix(size, 1)
    for row, r in enumerate(R):
        a = terms[r]
        if a == 0:
            raise ZeroTermError(r)
        phi = _omega(r, a, sigma_hat, ctx)
        x = ctx.power(r + alpha, inv_m)
        mat[row, 0] = ctx.one
        basis = phi
        for col in range(1, size):
            mat[row, col] = basis
            basis = basis * x
        rhs[row] = sums[r - 1] if use_prev else sums[r]

    try:
        sol = ctx.lu_solve(mat, rhs)
        unit = ctx.matrix(size, 1)
        unit[0] = ctx.one
        wvec = ctx.lu_solve(mat.T, unit)
    except (ZeroDivisionError, TypeError):
        # mpmath's pivot search leaves the pivot index unset (TypeError)
        # when a column is exactly zero below the diagonal
        raise SingularSystemError(
            f"extrapolation system for (j={j}, n={n}) has a zero pivot; "
            f"1-norm {ctx.mnorm(mat, 1)}",
            condition_estimate=ctx.inf,
        ) from None

    return DenseSolve(
        j=j,
        n=n,
        alpha=alpha,
        sigma_hat=sigma_hat,
        value=sol[0],
        betas=[sol[i] for i in range(1, size)],
        weights=[wvec[i] for i in range(size)],
        samples=[rhs[i] for i in range(size)],
    )


def gamma_from_weights(solve: DenseSolve):
    """Gamma = sum(|gamma_{n,i}|) >= 1: amplification of ordinate errors."""
    total = 0
    for w in solve.weights:
        total = abs(w) + total
    return total


def lambda_from_weights(solve: DenseSolve):
    """Lambda = sum(|gamma_{n,i}| * |ordinate_i|): scale seen by relative errors."""
    total = 0
    for w, s in zip(solve.weights, solve.samples):
        total = abs(w) * abs(s) + total
    return total
