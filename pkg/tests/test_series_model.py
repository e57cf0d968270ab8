import json
from fractions import Fraction

import pytest

from fracsum.numerics import RangeOverflowError, resolve_scalar
from fracsum.series_model import (
    ProductProblem,
    SeriesProblem,
    TelescopingFamily,
    ZeroPartialProductError,
    builtin_ids,
    builtin_problem,
    load_problem,
    partial_sums,
    product_to_series,
    telescoping_terms,
    trig_series_pair,
)


def test_partial_sums_first_term_ex5_1(qctx):
    p = builtin_problem("ex5_1")
    sums = partial_sums(p, 3, qctx)
    assert sums[0] == qctx.exp(-1) - 1  # a_1 = e^-1 - e^0
    assert abs(abs(sums[0] + 1) - qctx.mpf("0.368")) < 5e-4


def test_partial_sums_zero_series(qctx):
    p = SeriesProblem("zeros", lambda n, ctx: ctx.zero, m=1)
    assert all(s == 0 for s in partial_sums(p, 10, qctx))


def test_partial_sums_ex5_5_row(qctx):
    sums = partial_sums(builtin_problem("ex5_5"), 5, qctx)
    assert abs(sums[4] - qctx.mpf("29.2")) <= 0.007 * qctx.mpf("29.2")


def test_partial_sums_overflow_names_index(dctx):
    p = SeriesProblem("grower", lambda n, ctx: ctx.exp(n), m=1)
    with pytest.raises(RangeOverflowError, match=r"A_7\d\d"):
        partial_sums(p, 740, dctx)


def test_partial_sums_rejects_bad_upto(qctx):
    with pytest.raises(ValueError):
        partial_sums(builtin_problem("ex5_1"), 0, qctx)


def test_telescoping_example_terms(qctx):
    # kind 1, s=0, Q = -sqrt(n) reproduces the e^(-sqrt n) difference terms
    p = telescoping_terms(TelescopingFamily(1, 0, 2, (0, -1)))
    a2 = p.term(2, qctx)
    assert abs(a2 - (qctx.exp(-qctx.sqrt(2)) - qctx.exp(-1))) <= 4 * qctx.eps * abs(a2)
    assert p.known_S == -1
    # kind 2, s=0, Q = +sqrt(n)
    q = telescoping_terms(TelescopingFamily(2, 0, 2, (0, 1)))
    a3 = q.term(3, qctx)
    ref = -(qctx.exp(qctx.sqrt(3)) + qctx.exp(qctx.sqrt(2)))
    assert abs(a3 - ref) <= 4 * qctx.eps * abs(ref)
    # kind 1 with s=1 carries the sqrt(n!) factor
    r = telescoping_terms(TelescopingFamily(1, 1, 2, (0, -1)))
    a4 = r.term(4, qctx)
    ref4 = qctx.sqrt(24) * qctx.exp(-2) - qctx.sqrt(6) * qctx.exp(-qctx.sqrt(3))
    assert abs(a4 - ref4) <= 8 * qctx.eps * abs(ref4)


def test_telescoping_family_validation():
    with pytest.raises(ValueError):
        TelescopingFamily(3, 0, 2, (0, 1))
    with pytest.raises(ValueError):
        TelescopingFamily(1, 0, 2, (0,))
    with pytest.raises(ValueError):
        TelescopingFamily(1, 0, 2, (0, 0))  # a_n identically zero


FAMILIES = [
    TelescopingFamily(1, 0, 2, (0, -1)),
    TelescopingFamily(2, 0, 2, (0, -1)),
    TelescopingFamily(1, 0, 2, (0, 1)),
    TelescopingFamily(2, 0, 2, (0, 1)),
    TelescopingFamily(1, 0, 2, (Fraction(-1, 5), 1)),
    TelescopingFamily(2, 0, 2, (Fraction(-1, 5), 1)),
    TelescopingFamily(1, 1, 2, (0, -1)),
    TelescopingFamily(2, 1, 2, (0, -1)),
    TelescopingFamily(1, -2, 3, (0, 1, 0)),
    TelescopingFamily(2, 1, 3, (Fraction(1, 2), 0, -1)),
    TelescopingFamily(1, 0, 2, (0, 1j)),  # complex phase
]


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f"k{f.kind}s{f.s}m{f.m}")
def test_telescoping_identity_short(qctx, family):
    p = telescoping_terms(family)
    sums = partial_sums(p, 60, qctx)
    peak = qctx.zero
    for n, total in enumerate(sums, start=1):
        peak = max(peak, abs(total))
        closed = family.closed_partial_sum(n, qctx)
        assert abs(total - closed) <= 8 * n * qctx.eps * peak, n


def test_product_first_partial_product(qctx):
    p = product_to_series(builtin_problem("ex7_1"))
    assert p.term(1, qctx) == qctx.mpf(3) / 4  # A_1 = 1 - 1/4
    S = resolve_scalar(p.known_S, qctx)
    assert abs(S - 2 / qctx.pi) == 0


def test_product_empty(qctx):
    p = product_to_series(ProductProblem("one", lambda n, ctx: ctx.zero, m=1, t=2))
    assert p.term(1, qctx) == 1
    assert p.term(5, qctx) == 0


def test_product_ex7_2_row(qctx):
    sums = partial_sums(product_to_series(builtin_problem("ex7_2")), 5, qctx)
    assert abs(sums[4] - qctx.mpf("3.96")) <= 0.007 * qctx.mpf("3.96")


def test_product_round_trip(qctx):
    for ident in ("ex7_1", "ex7_2"):
        problem = builtin_problem(ident)
        series = product_to_series(problem)
        sums = partial_sums(series, 120, qctx)
        prod = qctx.one
        for n in range(1, 121):
            prod *= 1 + problem.v(n, qctx)
            assert abs(sums[n - 1] - prod) <= 4 * n * qctx.eps * abs(prod)


def test_product_zero_partial_product(qctx):
    bad = ProductProblem("dies", lambda n, ctx: ctx.mpf(-1) if n == 3 else ctx.zero, m=1, t=2)
    with pytest.raises(ZeroPartialProductError, match="A_3"):
        partial_sums(product_to_series(bad), 5, qctx)


def test_product_validation():
    with pytest.raises(ValueError):
        ProductProblem("bad", lambda n, ctx: ctx.zero, m=2, t=2)


def test_generator_determinism(qctx):
    for ident in ("ex5_11", "ex7_2", "ex5_14"):
        a = partial_sums(builtin_problem(ident) if not ident.startswith("ex7")
                         else product_to_series(builtin_problem(ident)), 40, qctx)
        b = partial_sums(builtin_problem(ident) if not ident.startswith("ex7")
                         else product_to_series(builtin_problem(ident)), 40, qctx)
        assert a == b  # bit-exact


def test_trig_pair_zero_phase(qctx):
    plus, minus = trig_series_pair(lambda n, ctx: 1 / ctx.mpf(n) ** 2, (0,), (0,), 0, 2)
    for n in (1, 2, 5):
        assert plus.term(n, qctx) == minus.term(n, qctx)
    assert plus.meta["h_is_real"] is True


def test_trig_pair_complex_h_probe():
    plus, _ = trig_series_pair(lambda n, ctx: ctx.mpc(1, 1) / n**2, (0,), (0, 1), 0, 2)
    assert plus.meta["h_is_real"] is False


def test_trig_pair_degree_check():
    with pytest.raises(ValueError):
        trig_series_pair(lambda n, ctx: ctx.one, (0, 1, 2, 3), (0,), 0, 2)


def test_sigma_hat_validation():
    with pytest.raises(ValueError):
        SeriesProblem("bad", lambda n, ctx: ctx.one, m=2, sigma_hat=Fraction(1, 3))
    with pytest.raises(ValueError):
        SeriesProblem("bad", lambda n, ctx: ctx.one, m=2, sigma_hat=2)


def test_builtin_registry():
    ids = builtin_ids()
    assert len(ids) == 16
    assert ids[0] == "ex5_1" and "ex7_2" in ids
    with pytest.raises(KeyError):
        builtin_problem("ex9_9")


def test_load_problem_builtin_dict():
    problem, schedule = load_problem({"builtin": "ex5_2", "schedule": "aps:1,1"})
    assert problem.known_S == -1
    assert schedule.prefix(3) == [1, 2, 3]


def test_load_problem_expression(tmp_path, qctx):
    spec = {
        "name": "inv-square",
        "expression": "1/(n*n)",
        "m": 1,
        "sigma_hat": "1",
        "known_S": "pi*pi/6",
        "schedule": "gps:1.3",
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(spec))
    problem, schedule = load_problem(str(path))
    assert problem.term(3, qctx) == qctx.mpf(1) / 9
    assert abs(resolve_scalar(problem.known_S, qctx) - qctx.pi**2 / 6) == 0
    assert schedule.prefix(2) == [1, 2]


def test_load_problem_expression_matches_builtin(qctx):
    problem, _ = load_problem(
        {"expression": "exp(-sqrt(n)) - exp(-sqrt(n-1))", "m": 2}
    )
    builtin = builtin_problem("ex5_1")
    for n in (1, 2, 10):
        a, b = problem.term(n, qctx), builtin.term(n, qctx)
        assert abs(a - b) <= 4 * qctx.eps * abs(b)


def test_load_problem_requires_m():
    with pytest.raises(ValueError):
        load_problem({"expression": "1/n"})
