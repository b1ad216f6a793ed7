"""Rational Newton-Puiseux expansion of plane curve germs.

Each expansion thread is recorded as a *recipe*: the chain of monomial
substitutions ``X -> lam X^q, Y -> X^p (mu + Y)`` followed by a terminal
stage that is either ``Y = 0`` exactly or a smooth germ solved by Newton
iteration.  A recipe can be realized at any truncation, which lets branches
be re-expanded on demand when a larger window is needed.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import sympy
from gmpy2 import mpq

from .curve import Branch
from .errors import IrrationalCoefficient, NotSquareFree, ZeroPolynomial
from .series import ABOVE_TRUNC, MPoly, Series, rational_root

__all__ = ["Edge", "NewtonPolygon", "newton_polygon", "puiseux_branches", "expansion_recipes"]


@dataclass(frozen=True)
class Edge:
    start: tuple  # (i, j): the endpoint with the larger Y-degree
    end: tuple
    slope: Fraction  # (i_end - i_start) / (j_start - j_end)

    @property
    def height(self):
        return self.start[1] - self.end[1]


@dataclass(frozen=True)
class NewtonPolygon:
    edges: tuple

    @property
    def vertices(self):
        if not self.edges:
            return ()
        return (self.edges[0].start,) + tuple(e.end for e in self.edges)


def newton_polygon(f):
    """Compact edges of the Newton polygon of ``f(X, Y)`` at the origin."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")
    if f.constant_term():
        raise ValueError("f does not vanish at the origin")
    left_i = min(i for i, _ in f.terms)
    left_j = min(j for i, j in f.terms if i == left_i)
    # lowest X-degree for each Y-degree up to the leftmost vertex
    low = {}
    for i, j in f.terms:
        if j <= left_j and (j not in low or i < low[j]):
            low[j] = i
    pts = sorted(((j, i) for j, i in low.items()), reverse=True)  # decreasing j
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (j1, i1), (j2, i2) = hull[-2], hull[-1]
            # keep the lower convex chain seen from below-left
            if (i2 - i1) * (j1 - p[0]) >= (p[1] - i1) * (j1 - j2):
                hull.pop()
            else:
                break
        hull.append(p)
    edges = []
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        edges.append(Edge((i1, j1), (i2, j2), Fraction(i2 - i1, j1 - j2)))
    return NewtonPolygon(tuple(edges))


def _rational_roots(coeffs):
    """Rational roots with multiplicity of ``sum coeffs[k] W^k``."""
    w = sympy.Symbol("w")
    poly = sympy.Poly(
        [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)],
        w,
        domain="QQ",
    )
    roots = []
    _, factors = poly.factor_list()
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append((mpq(int(r.p), int(r.q)), mult))
        elif fac.degree() > 1:
            raise IrrationalCoefficient(str(fac.as_expr()))
    roots.sort(key=lambda rm: rm[0])
    return roots


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _substitute(terms, lam, q, p, mu):
    """``G(lam X^q, X^p (mu + Y)) / X^h`` as a term dictionary."""
    out = {}
    binom_cache = {}
    for (i, j), c in terms.items():
        base = c * lam ** i
        e = q * i + p * j
        if j not in binom_cache:
            row = [mpq(1)]
            for k in range(1, j + 1):
                row.append(row[-1] * (j - k + 1) / k)
            binom_cache[j] = row
        for k, bk in enumerate(binom_cache[j]):
            # (mu + Y)^j = sum_k C(j,k) mu^(j-k) Y^k
            v = base * bk * mu ** (j - k)
            if v:
                key = (e, k)
                out[key] = out.get(key, 0) + v
    out = {k: v for k, v in out.items() if v}
    h = min(i for i, _ in out)
    return {(i - h, j): v for (i, j), v in out.items()}


def _y_order(terms):
    """Order of ``G(0, Y)``."""
    js = [j for (i, j) in terms if i == 0]
    return min(js) if js else None


def expansion_recipes(f):
    """All expansion threads of ``f``, each a tuple of steps plus a terminal."""
    terms = {e: mpq(c) for e, c in f.terms.items()}
    if not terms:
        raise ZeroPolynomial("cannot expand the zero polynomial")
    recipes = []
    _expand(terms, (), recipes)
    return recipes


def _expand(terms, steps, out):
    m = _y_order(terms)
    if m is None:
        raise ValueError("expansion stage is divisible by X")
    jmin = min(j for _, j in terms)
    if jmin >= 2:
        raise NotSquareFree("a branch occurs with multiplicity > 1")
    if jmin == 1:
        out.append((steps, ("zero",)))
        terms = {(i, j - 1): c for (i, j), c in terms.items()}
        m -= 1
        if m == 0:
            return
    if m == 1:
        out.append((steps, ("implicit", terms)))
        return
    poly = MPoly(terms, 2)
    for edge in newton_polygon(poly).edges:
        p, q = edge.slope.numerator, edge.slope.denominator
        (i1, j1), (i2, j2) = edge.start, edge.end
        heights = (j1 - j2) // q
        coeffs = [terms.get((i2 - p * k, j2 + q * k), mpq(0)) for k in range(heights + 1)]
        for w, _mult in _rational_roots(coeffs):
            if w == 0:
                continue
            _, a, bneg = _ext_gcd(q, p)  # a q + bneg p = 1
            b = -bneg
            mu = w ** a
            lam = w ** b
            nxt = _substitute(terms, lam, q, p, mu)
            _expand(nxt, steps + ((lam, q, p, mu),), out)


def _solve_smooth(terms, n):
    """Series ``Y(X)`` with ``G(X, Y(X)) = 0`` to degree ``n`` (``G_Y(0,0) != 0``)."""
    by_j = {}
    for (i, j), c in terms.items():
        by_j.setdefault(j, {})[i] = c
    deg = max(by_j)

    def coef_series(j, prec):
        return Series({i: c for i, c in by_j.get(j, {}).items() if i <= prec}, prec)

    y = Series((), 0)
    prec = 1
    while True:
        prec = min(2 * prec, n)
        y = Series(y.coeffs, prec)
        cs = [coef_series(j, prec) for j in range(deg + 1)]
        # Horner for G and G_Y
        g = cs[deg]
        dg = cs[deg] * deg
        for j in range(deg - 1, -1, -1):
            g = g * y + cs[j]
            if j >= 1:
                dg = dg * y + cs[j] * j
        dg = _fit(dg, prec)
        g = _fit(g, prec)
        y = _fit(y - g * dg.inverse(), prec)
        if prec == n:
            break
    # one more step at full precision certifies the fixed point
    cs = [coef_series(j, n) for j in range(deg + 1)]
    g = cs[deg]
    for j in range(deg - 1, -1, -1):
        g = g * y + cs[j]
    if not _fit(g, n).is_zero():
        dg = cs[deg] * deg
        for j in range(deg - 1, 0, -1):
            dg = dg * y + cs[j] * j
        y = _fit(y - _fit(g, n) * _fit(dg, n).inverse(), n)
    return y


def _fit(s, n):
    if s.trunc >= n:
        return s.truncate(n)
    return Series(s.coeffs, s.trunc) if s.trunc >= 0 else s


def realize(recipe, n):
    """``(x(t), y(t))`` of an expansion thread, both known to ``t^n``."""
    steps, terminal = recipe
    if terminal[0] == "zero":
        ys = Series((), n)
    else:
        ys = _solve_smooth(terminal[1], n)
    # X_k = c * T^e
    c, e = mpq(1), 1
    for lam, q, p, mu in reversed(steps):
        ys = ys + mu
        factor = c ** p
        ys = Series._raw(tuple(v * factor for v in ys.dense), ys.trunc).shift(e * p)
        c = lam * c ** q
        e = e * q
    x = Series({e: c}, n)
    ys = ys.truncate(n) if ys.trunc >= n else ys
    kappa = rational_root(c, e)
    if kappa is not None and kappa != 1:
        # t -> t / kappa makes x a monic power
        x = Series({e: 1}, n)
        ys = ys.scale_variable(1 / kappa)
    return x, ys


def _vertical(n):
    return Series((), n), Series({1: 1}, n)


def puiseux_branches(f, n, label_prefix="f"):
    """Branches of ``f`` at the origin, each verified by substitution.

    A simple factor ``X`` yields the vertical branch ``(0, t)``.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot expand the zero polynomial")
    kx = min(e[0] for e in f.terms)
    if kx >= 2:
        raise NotSquareFree("X divides f more than once")
    rest = MPoly({(i - kx, j): c for (i, j), c in f.terms.items()}, 2)
    sources = []
    if kx == 1:
        sources.append(_vertical)
    if rest.constant_term() == 0:
        m = _y_order(rest.terms)
        total = 0
        for rec in expansion_recipes(rest):
            src = partial(realize, rec)
            e = 1
            for step in rec[0]:
                e *= step[1]
            total += e
            sources.append(src)
        if total != m:
            raise RuntimeError(f"expansion incomplete: ramification sum {total} != {m}")
    branches = []
    for k, src in enumerate(sources):
        b = Branch(src(n), f"{label_prefix}.{k + 1}", src)
        o = _check_substitution(f, b)
        if o is not ABOVE_TRUNC and o <= b.trunc:
            raise RuntimeError(f"branch {b.label} does not lie on the curve (order {o})")
        branches.append(b)
    return branches


def _check_substitution(f, b):
    from .series import mpoly_eval_series

    return mpoly_eval_series(f, b.params).ord()
