"""Property-based checks of algebraic laws and invariance statements."""

import itertools
from math import gcd

from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tjurina.combinatorics import maximals
from tjurina.curve import value_of_function
from tjurina.errors import NotSquareFree
from tjurina.invariants import CurveAnalysis, analysis, compute
from tjurina.parser import parse_polynomial, parse_series
from tjurina.series import ABOVE_TRUNC, MPoly, Series, format_mpoly, mpoly_eval_series
from tjurina.construct import curve_from_branches
from tjurina.value_sets import gamma_set, lambda_set
from tjurina.verification import dee_operator, tjurina_direct

from conftest import poly_curve

small = st.integers(-4, 4)
coeffs = st.dictionaries(st.integers(0, 8), small.filter(bool), max_size=5)


@st.composite
def series(draw, trunc=10):
    return Series(draw(coeffs), trunc)


@given(series(), series(), series())
def test_series_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a * b).truncate(10) == (b * a).truncate(10)
    assert ((a * b) * c).truncate(10) == (a * (b * c)).truncate(10)
    assert (a * (b + c)).truncate(10) == (a * b + a * c).truncate(10)


@given(series(), series())
def test_series_leibniz_and_order(a, b):
    n = 8
    lhs = (a * b).derivative().truncate(n)
    rhs = (a.derivative() * b + a * b.derivative()).truncate(n)
    assert lhs == rhs
    if a.ord() is not ABOVE_TRUNC and b.ord() is not ABOVE_TRUNC:
        p = a * b
        assert p.ord() == a.ord() + b.ord() or (p.ord() is ABOVE_TRUNC and a.ord() + b.ord() > p.trunc)


@st.composite
def mpolys(draw, nvars=2, max_deg=6):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * nvars),
        st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
        max_size=6,
    ))
    return MPoly({e: mpq(c.numerator, c.denominator) for e, c in terms.items()}, nvars)


@given(mpolys())
def test_parser_round_trip(p):
    assert parse_polynomial(format_mpoly(p)) == p


@given(mpolys(), mpolys())
def test_evaluation_is_a_ring_map(p, q):
    args = (Series({2: 1, 3: 1}, 12), Series({3: 1, 5: -2}, 12))
    n = 12
    assert mpoly_eval_series(p * q, args).truncate(n) == (
        mpoly_eval_series(p, args) * mpoly_eval_series(q, args)).truncate(n)


# random rational branches x = t^a, y = sum c_k t^k

@st.composite
def branch_coords(draw):
    a = draw(st.integers(1, 3))
    exps = draw(st.lists(st.integers(a + 1, a + 6), min_size=1, max_size=3, unique=True))
    cs = [draw(st.integers(-3, 3).filter(bool)) for _ in exps]
    g = a
    for e in exps:
        g = gcd(g, e)
    assume(g == 1)
    y = " + ".join(f"({c})*t^{e}" for c, e in zip(cs, exps))
    return (f"t^{a}", y)


def build(coords_list):
    try:
        return curve_from_branches([[parse_series(s) for s in b] for b in coords_list])
    except NotSquareFree:
        assume(False)


@settings(max_examples=15)
@given(st.lists(branch_coords(), min_size=2, max_size=3))
def test_branch_permutation_invariance(coords_list):
    c = build(coords_list)
    taus = set()
    for order in itertools.permutations(range(c.r)):
        rep = compute(c.reorder(order))
        taus.add(rep.tau)
        assert len(set(rep.formula_values().values())) == 1
    assert len(taus) == 1


@settings(max_examples=15)
@given(branch_coords(), st.integers(-3, 3).filter(bool))
def test_reparametrization_invariance(coords, k):
    c = build([coords])
    # t -> t + k t^2 is an automorphism of k[[t]]
    sub = Series({1: 1, 2: k}, 40)
    moved = [[Series(parse_series(s).coeffs, 40).compose(sub) for s in coords]]
    # exact polynomials of degree < 40; x is no longer a pure power of t
    c2 = curve_from_branches(moved)
    assert gamma_set(c) == gamma_set(c2)
    assert lambda_set(c) == lambda_set(c2)
    assert compute(c).tau == compute(c2).tau


@settings(max_examples=10)
@given(st.lists(branch_coords(), min_size=1, max_size=2), st.integers(1, 6))
def test_window_enlargement(coords_list, slack):
    c = build(coords_list)
    a0, a1 = CurveAnalysis(c), CurveAnalysis(c, slack)
    assert a0.gamma == a1.gamma
    assert a0.lam == a1.lam
    assert a0.jac == a1.jac


@settings(max_examples=10)
@given(st.lists(branch_coords(), min_size=1, max_size=2))
def test_semigroup_and_module_closure(coords_list):
    c = build(coords_list)
    a = analysis(c)
    g, lam = a.gamma, a.lam
    gpts = g.finite_points(tuple(ci + 2 for ci in g.conductor))
    lpts = lam.finite_points(tuple(ci + 2 for ci in lam.conductor))
    for p, q in itertools.product(gpts[:25], repeat=2):
        assert tuple(x + y for x, y in zip(p, q)) in g
    for p, q in itertools.product(gpts[:20], lpts[:20]):
        assert tuple(x + y for x, y in zip(p, q)) in lam
    # min of two members is a member (good semigroup axiom)
    for p, q in itertools.product(gpts[:20], repeat=2):
        assert tuple(min(x, y) for x, y in zip(p, q)) in g


FACTOR_POOL = ["y - {a}*x", "y - {a}*x^2", "y - x^2 - {a}*x^3", "x - {a}*y^2",
               "y^2 - x^3 + {a}*x^2*y", "y^3 - {a}*x^4"]


@st.composite
def plane_products(draw):
    k = draw(st.integers(1, 3))
    picks = draw(st.lists(st.tuples(st.sampled_from(FACTOR_POOL), st.integers(1, 3)),
                          min_size=k, max_size=k))
    return "*".join("(" + t.format(a=a) + ")" for t, a in picks)


@settings(max_examples=12)
@given(plane_products())
def test_oracle_agrees_with_formulas(src):
    try:
        c = poly_curve(src)
    except NotSquareFree:
        assume(False)
    rep = compute(c)
    assert len(set(rep.formula_values().values())) == 1
    assert rep.delta == rep.delta_recursion
    assert tjurina_direct(c.poly) == rep.tau


@st.composite
def nonunit_polys(draw):
    p = draw(mpolys(max_deg=4))
    p = p - MPoly.const(p.constant_term(), 2)
    assume(not p.is_zero())
    return p


THREE_SMALL = "(y^3-x^7)*(y^3-3*x^5*y-x^7-x^8)"


@settings(max_examples=20)
@given(nonunit_polys(), st.integers(-3, 3))
def test_dee_operator_order_law(g, u):
    c = poly_curve(THREE_SMALL)
    cond = analysis(c).gamma.conductor
    vals = value_of_function(c, g)
    d = dee_operator(c, g)
    du = dee_operator(c, g + MPoly.const(u, 2))
    for i in range(c.r):
        v = vals[i]
        if not isinstance(v, int):
            continue  # g vanishes on the branch, D(g) is divisible by f there
        assert d[i].ord() == v + cond[i] - 1
        # adding a constant does not change D(g)
        assert du[i].truncate(d[i].trunc) == d[i].truncate(du[i].trunc)


@settings(max_examples=8)
@given(st.lists(branch_coords(), min_size=2, max_size=3))
def test_maximals_match_brute_force(coords_list):
    c = build(coords_list)
    lam = analysis(c).lam
    cond = lam.conductor
    pts = set(lam.finite_points(tuple(ci + max(c.multiplicities()) + 2 for ci in cond)))
    rep = maximals(lam)
    r = c.r
    window_hi = tuple(ci + 5 for ci in cond)

    def fiber_nonempty(alpha, J):
        # members equal on J, strictly larger elsewhere (larger-than-window counts)
        ranges = []
        for i in range(r):
            if i in J:
                ranges.append([alpha[i]])
            else:
                ranges.append(range(alpha[i] + 1, window_hi[i] + 1))
        return any(p in lam for p in itertools.product(*ranges))

    brute = {a for a in pts if all(x < ci for x, ci in zip(a, cond))
             and not any(fiber_nonempty(a, {i}) for i in range(r))}
    assert brute == set(rep.M)
