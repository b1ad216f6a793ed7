"""Building curves from implicit equations or explicit parametrizations."""

import sympy
from gmpy2 import mpq

from .curve import Curve, PlaneFactor, curve_from_branches, intersection_multiplicity, reconstruct_factor
from .errors import NotSquareFree, PreconditionError, ZeroPolynomial
from .puiseux import puiseux_branches
from .series import MPoly

__all__ = ["curve_from_branches", "curve_from_polynomial", "to_sympy", "from_sympy"]

_X, _Y = sympy.symbols("x y")
DEFAULT_TRUNC = 40


def to_sympy(p):
    """MPoly in (X, Y) as a sympy Poly over QQ."""
    terms = {e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(terms, _X, _Y, domain="QQ") if terms else sympy.Poly(0, _X, _Y, domain="QQ")


def from_sympy(poly):
    terms = {}
    for e, c in poly.as_dict().items():
        c = sympy.Rational(c)
        terms[tuple(int(k) for k in e)] = mpq(int(c.p), int(c.q))
    return MPoly(terms, 2)


def _transversal_shift(f):
    """Least ``a >= 0`` such that ``x -> x - a y`` makes ``x`` transversal."""
    lead = f.initial_form()
    m = lead.order()
    for a in range(0, 64):
        if lead(-a, 1) != 0:
            return a
    raise PreconditionError("no transversal coordinate found")  # unreachable for m >= 1


def _shift(p, a):
    if not a:
        return p
    x = MPoly.var(0, 2) - MPoly.var(1, 2) * a
    return p.compose([x, MPoly.var(1, 2)])


def _irreducible_pieces(factor):
    """Irreducible factors over Q vanishing at the origin, in a stable order."""
    _, pieces = to_sympy(factor).factor_list()
    out = []
    for piece, mult in pieces:
        p = from_sympy(piece)
        if p.constant_term() != 0:
            continue
        if mult > 1:
            raise NotSquareFree(f"factor {piece.as_expr()} occurs with multiplicity {mult}")
        out.append(p)
    out.sort(key=lambda p: (p.order(), p.degree(), sorted(p.terms.items())))
    return out


def curve_from_polynomial(f, factors=None, trunc=DEFAULT_TRUNC):
    """Plane curve germ ``f = 0`` at the origin.

    ``factors`` optionally lists the top-level factors in the order the
    branches should follow; each is split further into irreducible factors
    and then into branches.
    """
    if f.is_zero():
        raise ZeroPolynomial("the polynomial is identically zero")
    if f.nvars != 2:
        raise PreconditionError("implicit input must be a polynomial in x and y")
    if f.constant_term() != 0:
        raise PreconditionError("the curve does not pass through the origin")
    if factors is None:
        factors = [f]
    pieces = []
    for fac in factors:
        pieces.extend(_irreducible_pieces(fac))
    # the same irreducible factor in two top-level factors
    seen = set()
    for p in pieces:
        key = frozenset(_monic(p).terms.items())
        if key in seen:
            raise NotSquareFree("a factor is repeated")
        seen.add(key)
    if not pieces:
        raise PreconditionError("the curve does not pass through the origin")
    a = _transversal_shift(f)
    f = _shift(f, a)
    pieces = [_shift(p, a) for p in pieces]
    branches = []
    branch_factors = []
    for k, p in enumerate(pieces):
        bs = puiseux_branches(p, trunc, label_prefix=f"f{k + 1}")
        if len(bs) == 1:
            bs[0].label = f"f{k + 1}"
            branch_factors.append(PlaneFactor(p))
        else:
            for b in bs:
                branch_factors.append(reconstruct_factor(*b.params))
        branches.extend(bs)
    defining = [PlaneFactor(p) for p in pieces]
    curve = Curve(branches, branch_factors, defining, f, None, a, "poly")
    for j in range(curve.r):
        for k in range(j + 1, curve.r):
            intersection_multiplicity(curve, j, k)
    return curve


def _monic(p):
    lead = max(p.terms)
    c = p.terms[lead]
    return p * (1 / c)
