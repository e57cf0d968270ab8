"""Series and product models.

Defines term generators and partial-sum accumulation, the telescoping
difference families used as benchmark problems, the product-to-series
adapter for infinite products, trigonometric series pairs, and the
registry of builtin problems (``ex5_1`` ... ``ex5_14``, ``ex7_1``,
``ex7_2``) consumed by the CLI and the reference-table harness.

Term generators are pure functions of ``(n, ctx)``; repeated evaluation
is bit-exact.  Factorial-type factors are evaluated in the log domain
and exponentiated once.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .numerics import (
    QUAD,
    as_value,
    check_range,
    ln_factorial_frac,
    make_context,
    precision_of,
)
from .sampling import parse_schedule

__all__ = [
    "SeriesProblem",
    "TelescopingFamily",
    "ProductProblem",
    "ZeroPartialProductError",
    "partial_sums",
    "sums_and_terms",
    "telescoping_terms",
    "product_to_series",
    "trig_series_pair",
    "builtin_problem",
    "builtin_ids",
    "load_problem",
]

TermFn = Callable[[int, object], object]


class ZeroPartialProductError(ValueError):
    """A partial product reached zero; the series model breaks down."""


@dataclass
class SeriesProblem:
    """An infinite series sum(a_n) with terms expanding in powers of n^(1/m).

    ``term(n, ctx)`` returns a_n (real mpf or complex mpc) for n >= 1.
    ``sigma_hat`` is the exponent used in the remainder weight
    omega_r = r^sigma_hat * a_r; 1 is the safe universal choice.
    ``known_S`` is the limit (or antilimit) when available: a number or
    a callable of ctx for values like 2/pi that depend on the precision.
    """

    name: str
    term: TermFn
    m: int
    sigma_hat: Fraction = Fraction(1)
    known_S: object = None
    kind: str = "series"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        self.sigma_hat = Fraction(self.sigma_hat)
        if self.sigma_hat > 1:
            raise ValueError("sigma_hat must satisfy sigma_hat <= 1")
        if self.m % self.sigma_hat.denominator:
            raise ValueError("sigma_hat must be a multiple of 1/m")


def sums_and_terms(problem: SeriesProblem, upto: int, ctx):
    """Terms a_1..a_N and partial sums A_1..A_N in one left-to-right pass."""
    if upto < 1:
        raise ValueError("upto must be >= 1")
    prec = precision_of(ctx)
    terms = []
    sums = []
    total = ctx.zero
    for n in range(1, upto + 1):
        a = as_value(problem.term(n, ctx), ctx)
        total = total + a
        if prec is not None:
            check_range(total, ctx, prec, f"partial sum A_{n}")
        terms.append(a)
        sums.append(total)
    return sums, terms


def partial_sums(problem: SeriesProblem, upto: int, ctx):
    """Partial sums A_1..A_N by left-to-right accumulation.

    Raises :class:`~fracsum.numerics.RangeOverflowError` naming the first
    index whose sum leaves the active precision's exponent range.
    """
    return sums_and_terms(problem, upto, ctx)[0]


# ---------------------------------------------------------------------------
# Telescoping difference families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TelescopingFamily:
    """Difference family with delta_n = (n!)^(s/m) * exp(Q(n)), delta_0 = 1.

    kind 1:  a_n = delta_n - delta_{n-1},        A_n = -1 + delta_n
    kind 2:  a_n = (-1)^n (delta_n + delta_{n-1}), A_n = -1 + (-1)^n delta_n

    Q(n) = theta_0*n + sum_{i>=1} theta_i*n^(1-i/m); ``theta`` lists
    theta_0..theta_{m-1}.  The sum (or antilimit) is always -delta_0 = -1.
    """

    kind: int
    s: int
    m: int
    theta: tuple

    def __post_init__(self):
        if self.kind not in (1, 2):
            raise ValueError("kind must be 1 or 2")
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if len(self.theta) != self.m:
            raise ValueError("theta must list theta_0..theta_{m-1}")
        object.__setattr__(self, "theta", tuple(self.theta))
        if self.kind == 1 and self.s == 0 and all(t == 0 for t in self.theta):
            raise ValueError("degenerate family: delta_n constant, a_n identically zero")

    @property
    def r(self) -> Optional[int]:
        """First nonzero index among theta_1..theta_{m-1}, if any."""
        for i in range(1, self.m):
            if self.theta[i] != 0:
                return i
        return None

    def log_delta(self, n: int, ctx):
        """ln(delta_n); exactly 0 at n = 0."""
        if n == 0:
            return ctx.zero
        val = ln_factorial_frac(n, self.s, self.m, ctx)
        for i, th in enumerate(self.theta):
            if th == 0:
                continue
            val = val + as_value(th, ctx) * ctx.power(n, ctx.convert(Fraction(self.m - i, self.m)))
        return val

    def delta(self, n: int, ctx):
        return ctx.exp(self.log_delta(n, ctx))

    def term(self, n: int, ctx):
        d0 = self.delta(n - 1, ctx)
        d1 = self.delta(n, ctx)
        if self.kind == 1:
            return d1 - d0
        sign = 1 if n % 2 == 0 else -1
        return sign * (d1 + d0)

    def closed_partial_sum(self, n: int, ctx):
        """A_n from the telescoped closed form -delta_0 +- delta_n."""
        d = self.delta(n, ctx)
        if self.kind == 2 and n % 2:
            d = -d
        return d - 1

    # Structural predictions for the a_n asymptotics (used as metadata and
    # as the closed forms the classifier round-trip is checked against).

    def predicted_sigma(self) -> Fraction:
        theta0_zero = self.theta[0] == 0
        if self.s > 0:
            return Fraction(-self.s, self.m)
        if self.s < 0:
            return Fraction(0)
        if self.kind == 2:
            return Fraction(0)
        return Fraction(self.r, self.m) if theta0_zero else Fraction(0)

    def predicted_gamma(self) -> Fraction:
        if self.s < 0:
            return Fraction(-self.s, self.m)
        if self.kind == 2 or self.s > 0:
            return Fraction(0)
        return Fraction(-self.r, self.m) if self.theta[0] == 0 else Fraction(0)


def telescoping_terms(family: TelescopingFamily) -> SeriesProblem:
    """Series problem for a telescoping family; the limit/antilimit is -1."""
    return SeriesProblem(
        name=f"telescoping(kind={family.kind}, s={family.s}, m={family.m})",
        term=family.term,
        m=family.m,
        sigma_hat=Fraction(1),
        known_S=-1,
        meta={
            "family": family,
            "sigma": family.predicted_sigma(),
            "gamma": family.predicted_gamma(),
        },
    )


# ---------------------------------------------------------------------------
# Infinite products
# ---------------------------------------------------------------------------


@dataclass
class ProductProblem:
    """Infinite product prod(1 + v_n) with v_n decaying like n^(-t/m)."""

    name: str
    v: TermFn
    m: int
    t: int
    known_S: object = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if self.t < self.m + 1:
            raise ValueError("t must be >= m + 1 (convergence of the product)")


def product_to_series(problem: ProductProblem) -> SeriesProblem:
    """Series whose partial sums are the partial products of *problem*.

    a_1 = A_1 = 1 + v_1 and a_n = v_n * A_{n-1} for n >= 2, so that
    sum(a_k, k<=n) reproduces prod(1+v_k, k<=n) up to accumulation
    rounding.  Partial products are memoized per context; extension is
    sequential under a lock, so concurrent readers see complete values.
    """
    caches: dict = {}
    lock = threading.Lock()

    def partial_product(n, ctx):
        with lock:
            cache = caches.setdefault(ctx, [])
            while len(cache) < n:
                k = len(cache) + 1
                factor = 1 + as_value(problem.v(k, ctx), ctx)
                value = (cache[-1] if cache else ctx.one) * factor
                if value == 0:
                    raise ZeroPartialProductError(
                        f"partial product A_{k} of {problem.name!r} is zero"
                    )
                cache.append(value)
            return cache[n - 1]

    def term(n, ctx):
        if n == 1:
            return partial_product(1, ctx)
        return as_value(problem.v(n, ctx), ctx) * partial_product(n - 1, ctx)

    return SeriesProblem(
        name=problem.name,
        term=term,
        m=problem.m,
        sigma_hat=Fraction(1),
        known_S=problem.known_S,
        kind="product-derived",
        meta={"product": problem},
    )


# ---------------------------------------------------------------------------
# Trigonometric series pairs
# ---------------------------------------------------------------------------


def _frac_poly(coeffs, n, ctx, m):
    """sum(coeffs[i] * n^(i/m)); coefficient i pairs with exponent i/m."""
    val = ctx.zero
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            val = val + as_value(c, ctx)
        else:
            val = val + as_value(c, ctx) * ctx.power(n, ctx.convert(Fraction(i, m)))
    return val


def trig_series_pair(h, u1, u2, s: int, m: int, h_is_real=None):
    """Complex conjugate-pair problems a_n^± = (n!)^(s/m) e^(u1 ± i*u2) h(n).

    ``u1`` and ``u2`` are coefficient sequences of real polynomials of
    degree at most m in n^(1/m) (entry i multiplies n^(i/m)).  Cosine and
    sine sums follow as S_c = (S+ + S-)/2 and S_s = (S+ - S-)/(2i); for
    real h a single acceleration of S+ suffices (see transform.sum_trig).

    ``h_is_real`` may be forced; by default h is probed at n = 1, 2, 3.
    """
    u1 = tuple(u1)
    u2 = tuple(u2)
    if len(u1) > m + 1 or len(u2) > m + 1:
        raise ValueError("u1/u2 must have degree <= m in n^(1/m)")
    if h_is_real is None:
        ctx = make_context(QUAD)
        h_is_real = all(as_value(h(k, ctx), ctx).imag == 0 for k in (1, 2, 3))

    def make_term(sign):
        def term(n, ctx):
            growth = ln_factorial_frac(n, s, m, ctx) + _frac_poly(u1, n, ctx, m)
            phase = _frac_poly(u2, n, ctx, m)
            return ctx.exp(ctx.mpc(growth, sign * phase)) * as_value(h(n, ctx), ctx)

        return term

    meta = {"h_is_real": bool(h_is_real)}
    plus = SeriesProblem(
        name="trig-pair(+)", term=make_term(1), m=m, known_S=None, meta=dict(meta, branch="+")
    )
    minus = SeriesProblem(
        name="trig-pair(-)", term=make_term(-1), m=m, known_S=None, meta=dict(meta, branch="-")
    )
    return plus, minus


# ---------------------------------------------------------------------------
# Builtin problems
# ---------------------------------------------------------------------------


def _sign(n):
    return 1 if n % 2 == 0 else -1


def _ex5_5(n, ctx):
    return ctx.exp(ctx.sqrt(n))


def _ex5_6(n, ctx):
    return _sign(n) * ctx.exp(ctx.sqrt(n))


_FIFTH = Fraction(1, 5)


def _ex5_9(n, ctx):
    return ctx.exp(ctx.sqrt(n) - ctx.convert(_FIFTH) * n)


def _ex5_10(n, ctx):
    return _sign(n) * ctx.exp(ctx.convert(_FIFTH) * n - ctx.sqrt(n))


def _ex5_13(n, ctx):
    return _sign(n) * ctx.exp(ln_factorial_frac(n, 1, 2, ctx) - ctx.sqrt(n))


def _ex5_14(n, ctx):
    return ctx.power(n, ctx.sqrt(3)) / (1 + ctx.sqrt(n))


def _ex7_1_v(n, ctx):
    return ctx.mpf(-1) / (4 * n * n)


def _ex7_2_v(n, ctx):
    return ctx.power(n, ctx.mpf(-3) / 2)


def _direct(name, term, m, known_S=None, describe=""):
    def build():
        return SeriesProblem(
            name=name, term=term, m=m, known_S=known_S, meta={"describe": describe}
        )

    return build


def _family(name, kind, s, m, theta, describe=""):
    def build():
        p = telescoping_terms(TelescopingFamily(kind, s, m, theta))
        p.name = name
        p.meta["describe"] = describe
        return p

    return build


def _product(name, v, m, t, known_S=None, describe=""):
    def build():
        return ProductProblem(name=name, v=v, m=m, t=t, known_S=known_S)

    return build


_BUILTINS = {
    "ex5_1": _family("ex5_1", 1, 0, 2, (0, -1), "a_n = e^(-sqrt n) - e^(-sqrt(n-1)); S = -1"),
    "ex5_2": _family("ex5_2", 2, 0, 2, (0, -1), "a_n = (-1)^n (e^(-sqrt n) + e^(-sqrt(n-1))); S = -1"),
    "ex5_3": _family("ex5_3", 1, 0, 2, (0, 1), "a_n = e^(sqrt n) - e^(sqrt(n-1)); antilimit S = -1"),
    "ex5_4": _family("ex5_4", 2, 0, 2, (0, 1), "a_n = (-1)^n (e^(sqrt n) + e^(sqrt(n-1))); antilimit S = -1"),
    "ex5_5": _direct("ex5_5", _ex5_5, 2, None, "a_n = e^(sqrt n); antilimit unknown"),
    "ex5_6": _direct("ex5_6", _ex5_6, 2, None, "a_n = (-1)^n e^(sqrt n); antilimit unknown"),
    "ex5_7": _family("ex5_7", 1, 0, 2, (-_FIFTH, 1), "a_n = e^(-n/5+sqrt n) - e^(-(n-1)/5+sqrt(n-1)); S = -1"),
    "ex5_8": _family("ex5_8", 2, 0, 2, (-_FIFTH, 1), "a_n = (-1)^n (e^(-n/5+sqrt n) + e^(-(n-1)/5+sqrt(n-1))); S = -1"),
    "ex5_9": _direct("ex5_9", _ex5_9, 2, None, "a_n = e^(-n/5+sqrt n); limit unknown"),
    "ex5_10": _direct("ex5_10", _ex5_10, 2, None, "a_n = (-1)^n e^(n/5-sqrt n); antilimit unknown"),
    "ex5_11": _family("ex5_11", 1, 1, 2, (0, -1), "a_n = sqrt(n!) e^(-sqrt n) - sqrt((n-1)!) e^(-sqrt(n-1)); antilimit S = -1"),
    "ex5_12": _family("ex5_12", 2, 1, 2, (0, -1), "a_n = (-1)^n (sqrt(n!) e^(-sqrt n) + sqrt((n-1)!) e^(-sqrt(n-1))); antilimit S = -1"),
    "ex5_13": _direct("ex5_13", _ex5_13, 2, None, "a_n = (-1)^n sqrt(n!) e^(-sqrt n); antilimit unknown"),
    "ex5_14": _direct("ex5_14", _ex5_14, 2, None, "a_n = n^sqrt(3)/(1+sqrt n); antilimit unknown"),
    "ex7_1": _product("ex7_1", _ex7_1_v, 1, 2, lambda ctx: 2 / ctx.pi, "prod(1 - 1/(4n^2)); S = 2/pi"),
    "ex7_2": _product("ex7_2", _ex7_2_v, 2, 3, None, "prod(1 + n^(-3/2)); limit unknown"),
}


def builtin_ids() -> list:
    """Identifiers of the builtin benchmark problems."""

    def key(ident):
        group, number = ident[2:].split("_")
        return int(group), int(number)

    return sorted(_BUILTINS, key=key)


def builtin_problem(ident: str):
    """Fresh instance of a builtin problem (SeriesProblem or ProductProblem)."""
    try:
        factory = _BUILTINS[ident]
    except KeyError:
        raise KeyError(
            f"unknown builtin problem {ident!r}; available: {', '.join(builtin_ids())}"
        ) from None
    return factory()


# ---------------------------------------------------------------------------
# Problem-definition files
# ---------------------------------------------------------------------------

_EXPR_FUNCS = (
    "sqrt exp log sin cos tan atan power gamma loggamma factorial floor ceil fabs re im conj"
).split()


def _expression_term(expr: str) -> TermFn:
    # Trusted-input convenience; no builtins are exposed to the expression.
    code = compile(expr, "<term expression>", "eval")

    def term(n, ctx):
        env = {name: getattr(ctx, name) for name in _EXPR_FUNCS}
        # n is bound as an mpf so plain arithmetic stays at working precision
        env.update(n=ctx.mpf(n), pi=ctx.pi, e=ctx.exp(ctx.one), i=ctx.mpc(0, 1), abs=abs, mpf=ctx.mpf)
        return as_value(eval(code, {"__builtins__": {}}, env), ctx)

    return term


def load_problem(source):
    """Load a problem definition from a dict, a JSON string, or a file path.

    Fields: ``name``, ``builtin`` or ``expression``, ``m``, ``sigma_hat``,
    ``known_S`` (number or expression), ``schedule`` (CLI syntax).
    Returns ``(problem, schedule_or_None)``.
    """
    if isinstance(source, dict):
        spec = dict(source)
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            spec = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                spec = json.load(fh)

    schedule = parse_schedule(spec["schedule"]) if spec.get("schedule") else None

    if "builtin" in spec:
        problem = builtin_problem(spec["builtin"])
        if spec.get("name"):
            problem.name = spec["name"]
        return problem, schedule

    if "expression" not in spec:
        raise ValueError("problem definition needs either 'builtin' or 'expression'")
    if "m" not in spec:
        raise ValueError("expression problems must declare m")

    known_S = spec.get("known_S")
    if isinstance(known_S, str):
        s_term = _expression_term(known_S)
        known_S = lambda ctx: s_term(0, ctx)  # noqa: E731 - tiny closure

    problem = SeriesProblem(
        name=spec.get("name", "user-problem"),
        term=_expression_term(spec["expression"]),
        m=int(spec["m"]),
        sigma_hat=Fraction(str(spec.get("sigma_hat", 1))),
        known_S=known_S,
        meta={"describe": spec["expression"]},
    )
    return problem, schedule
