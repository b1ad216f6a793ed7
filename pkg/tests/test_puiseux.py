import pytest

from tjurina.errors import IrrationalCoefficient, NotSquareFree, ZeroPolynomial
from tjurina.puiseux import newton_polygon, puiseux_branches
from tjurina.series import ABOVE_TRUNC, MPoly, Series, mpoly_eval_series

from conftest import F1, F2, F3, X, Y


def edges(f):
    return [(e.start, e.end) for e in newton_polygon(f).edges]


def test_newton_polygons_single_edge():
    assert edges(F1) == [((0, 3), (7, 0))]
    assert edges(F2) == [((0, 3), (7, 0))]
    assert edges(F3) == [((0, 4), (9, 0))]


def test_newton_polygon_two_edges():
    f = (Y - X**2) * (Y**2 - X**3)
    assert len(edges(f)) == 2


def ts(coeffs, n):
    return Series(coeffs, n).truncate(n)


@pytest.mark.parametrize(
    "f, x, y",
    [
        (F1, {3: 1}, {7: 1}),
        (F2, {3: 1}, {7: 1, 8: 1}),
        (F3, {4: 1}, {9: 1, 10: 1}),
    ],
)
def test_branches_of_the_three_factors(f, x, y):
    (b,) = puiseux_branches(f, 30)
    px, py = b.params
    assert px.truncate(30) == ts(x, 30)
    assert py.truncate(30) == ts(y, 30)
    assert mpoly_eval_series(f, b.params).ord() is ABOVE_TRUNC


def test_reducible_inputs():
    bs = puiseux_branches(X * Y, 10)
    assert sorted((b.values() for b in bs), key=str) == [(1, None), (None, 1)]
    bs = puiseux_branches(Y**2 - X**4, 12)
    assert len(bs) == 2
    for b in bs:
        assert mpoly_eval_series(Y**2 - X**4, b.params).ord() is ABOVE_TRUNC


def test_implicit_terminal_branch():
    # smooth branch y = x^2 + x^3 + ... given implicitly
    f = Y - X**2 - X * Y
    (b,) = puiseux_branches(f, 15)
    assert mpoly_eval_series(f, b.params).ord() is ABOVE_TRUNC
    assert b.values() == (1, 2)


def test_irrational_coefficient():
    with pytest.raises(IrrationalCoefficient) as info:
        puiseux_branches(Y**2 - 2 * X**2, 10)
    assert "2" in str(info.value.minimal_polynomial)


def test_unit_has_no_branches():
    assert puiseux_branches(MPoly.const(1, 2) + X, 10) == []


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        newton_polygon(MPoly({}, 2))


def test_repeated_branch():
    with pytest.raises(NotSquareFree):
        puiseux_branches((Y - X**2) ** 2, 10)


def test_larger_truncation_extends():
    (b1,) = puiseux_branches(F2, 20)
    (b2,) = puiseux_branches(F2, 40)
    assert b2.params[1].truncate(20) == b1.params[1].truncate(20)
