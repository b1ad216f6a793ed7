"""Branches, curves and the evaluation maps into the branch series rings.

A :class:`Curve` is an ordered tuple of :class:`Branch` parametrizations.  For
plane curves it may also carry one implicit factor per branch, either an
exact polynomial or a power series factor reconstructed from the
parametrization, together with the list of polynomials whose product is the
defining equation.  Every value the rest of the package computes comes from
evaluating something along the branch series.
"""

from math import gcd

from gmpy2 import mpq

from .errors import (
    InputError,
    MissingFactor,
    NonFinite,
    NotSquareFree,
    NotTransversal,
    TruncationTooSmall,
)
from .series import ABOVE_TRUNC, TOP, MPoly, Series, mpoly_eval_series

__all__ = [
    "Branch",
    "Curve",
    "PlaneFactor",
    "differential_images",
    "intersection_multiplicity",
    "reconstruct_factor",
    "value_of_function",
    "vadd",
]

# Truncation beyond which an intersection multiplicity is declared infinite.
INTERSECTION_CAP = 1024
PARAM_TRUNC = 16


def vadd(a, b):
    """Componentwise sum of value vectors with TOP absorbing."""
    return tuple(TOP if (x is TOP or y is TOP) else x + y for x, y in zip(a, b))


def _order_or_top(s):
    o = s.ord()
    return TOP if o is ABOVE_TRUNC else o


def _pad(s, n):
    """Extend an exact polynomial series to truncation ``n``."""
    if n <= s.trunc:
        return s.truncate(n)
    return Series(s.coeffs, n)


class Branch:
    """Parametrization ``t -> (x_1(t), ..., x_n(t))`` of one branch.

    ``source`` regenerates the parameters at a larger truncation.  ``None``
    means the given series are polynomials in ``t`` (exact at any order).
    """

    __slots__ = ("params", "label", "source")

    def __init__(self, params, label="", source=None, check=True):
        self.params = tuple(params)
        self.label = label
        self.source = source
        if check:
            self._validate()

    def _validate(self):
        if not self.params:
            raise InputError("a branch needs at least one coordinate")
        g = 0
        nonzero = False
        for s in self.params:
            if s.trunc >= 0 and s.dense and s.dense[0]:
                raise InputError(f"branch {self.label!r} is not centred at the origin")
            for d in s.coeffs:
                g = gcd(g, d)
                nonzero = True
        if not nonzero:
            raise InputError(f"branch {self.label!r} is identically zero")
        if g != 1:
            raise InputError(
                f"branch {self.label!r} is not primitive: all exponents divisible by {g}"
            )

    @property
    def n(self):
        return len(self.params)

    @property
    def trunc(self):
        return min(s.trunc for s in self.params)

    def values(self):
        """Orders ``v(x_l)``, ``None`` for a coordinate vanishing to trunc."""
        out = []
        for s in self.params:
            o = s.ord()
            out.append(None if o is ABOVE_TRUNC else o)
        return tuple(out)

    @property
    def multiplicity(self):
        return min(v for v in self.values() if v is not None)

    def extend(self, n):
        """Same branch with every coordinate known at least to ``t^n``."""
        if self.trunc >= n:
            return self
        params = self.source(n) if self.source is not None else tuple(_pad(s, n) for s in self.params)
        return Branch(params, self.label, self.source, check=False)

    def map(self, fn):
        """Apply ``fn`` to the coordinate tuple, keeping the regeneration recipe."""
        src = self.source
        new_src = None if src is None else (lambda n, src=src: fn(src(n)))
        if src is None:
            # Polynomial input stays polynomial under polynomial maps.
            base = self.params
            return Branch(fn(base), self.label, None, check=False)
        return Branch(fn(self.params), self.label, new_src, check=False)

    def __repr__(self):
        inner = ", ".join(repr(s) for s in self.params)
        return f"Branch({self.label!r}: {inner})"


class PlaneFactor:
    """A factor ``g(X, Y)`` of a plane curve equation.

    ``x_prec`` is ``None`` for an exact polynomial.  Otherwise only the terms
    ``X^a Y^b`` with ``a <= x_prec`` are known and the rest is divisible by
    ``X^(x_prec + 1)``.
    """

    __slots__ = ("poly", "x_prec")

    def __init__(self, poly, x_prec=None):
        self.poly = poly
        self.x_prec = x_prec

    @property
    def exact(self):
        return self.x_prec is None

    def evaluate(self, params, dx=0, dy=0):
        """Series of the (differentiated) factor along ``params``; certified trunc."""
        p = self.poly
        for _ in range(dx):
            p = p.diff(0)
        for _ in range(dy):
            p = p.diff(1)
        s = mpoly_eval_series(p, params)
        if self.x_prec is not None:
            vx = params[0].ord()
            if vx is ABOVE_TRUNC:
                raise TruncationTooSmall("x vanishes to truncation on a branch")
            cap = vx * (self.x_prec + 1 - dx) - 1
            if cap < s.trunc:
                s = s.truncate(max(cap, -1))
        return s

    def __repr__(self):
        tag = "exact" if self.exact else f"mod X^{self.x_prec + 1}"
        return f"PlaneFactor({self.poly!r}, {tag})"


def normalize_branch(x, y):
    """Reparametrize so that ``x = lam * t^q``; returns ``(lam, q, y(t))``.

    Requires ``x = lam * t^q * u(t)`` with ``u(0) = 1``; the new parameter is
    ``s = t * u(t)^(1/q)``.
    """
    q = x.ord()
    if q is ABOVE_TRUNC:
        raise TruncationTooSmall("x vanishes to truncation")
    lam = x.coeff(q)
    n = x.trunc - q
    unit = Series._raw(tuple(c / lam for c in x.dense[q:]), n)
    if all(not c for c in unit.dense[1:]):
        return lam, q, y
    s_of_t = unit.root(q, leading=1).shift(1)
    t_of_s = s_of_t.reversion()
    return lam, q, y.compose(t_of_s)


def reconstruct_factor(x, y):
    """Weierstrass factor of the branch ``(x(t), y(t))`` with certified X-precision.

    Uses power sums of the conjugates ``y(zeta t)``: with ``x = lam t^q`` the
    power sum ``sum_zeta y(zeta t)^m`` keeps exactly the terms of ``y^m`` whose
    degree is divisible by ``q``.  Newton's identities then give the
    elementary symmetric functions, i.e. the coefficients in ``Y``.
    """
    lam, q, y = normalize_branch(x, y)
    a_prec = y.trunc // q
    inv_lam = 1 / lam
    power_sums = []
    ym = None
    for m in range(1, q + 1):
        ym = y if ym is None else ym * y
        prec = min(a_prec, ym.trunc // q)
        coeffs = {}
        scale = mpq(1)
        for a in range(prec + 1):
            c = ym.dense[q * a]
            if c:
                coeffs[a] = q * c * scale
            scale *= inv_lam
        power_sums.append(Series(coeffs, prec))
    # e_0 = 1, s e_s = sum_{i=1..s} (-1)^(i-1) e_{s-i} p_i
    e = [Series.const(1, a_prec)]
    for s in range(1, q + 1):
        acc = None
        for i in range(1, s + 1):
            term = e[s - i] * power_sums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc * mpq(1, s))
    prec = min(es.trunc for es in e)
    terms = {}
    for s in range(q + 1):
        sign = -1 if s % 2 else 1
        for a, c in e[s].coeffs.items():
            if a <= prec:
                terms[(a, q - s)] = sign * c
    return PlaneFactor(MPoly(terms, 2), prec)


class Curve:
    """Reduced curve germ given by ordered branch parametrizations.

    ``branch_factors[i]`` is the implicit factor vanishing on branch ``i``
    (plane curves only).  ``defining`` lists factors whose product is the
    equation up to a unit; ``poly`` is the exact defining polynomial when the
    input was implicit.  ``equations`` holds defining equations of a space
    curve when they were supplied.
    """

    def __init__(
        self,
        branches,
        branch_factors=None,
        defining=None,
        poly=None,
        equations=None,
        coordinate_change=0,
        origin="branches",
    ):
        self.branches = tuple(branches)
        if not self.branches:
            raise InputError("a curve needs at least one branch")
        ns = {b.n for b in self.branches}
        if len(ns) != 1:
            raise InputError("all branches must have the same number of coordinates")
        self.n = ns.pop()
        self.branch_factors = None if branch_factors is None else tuple(branch_factors)
        self.defining = None if defining is None else tuple(defining)
        self.poly = poly
        self.equations = None if equations is None else tuple(equations)
        self.coordinate_change = coordinate_change
        self.origin = origin
        self._im_cache = {}

    @property
    def r(self):
        return len(self.branches)

    @property
    def is_plane(self):
        return self.n == 2

    @property
    def trunc_policy(self):
        return tuple(b.trunc for b in self.branches)

    def multiplicities(self):
        """``v(x_1)`` on each branch (the transversal coordinate)."""
        out = []
        for b in self.branches:
            v = b.values()[0]
            if v is None:
                raise NotTransversal(f"x vanishes identically on branch {b.label!r}")
            out.append(v)
        return tuple(out)

    def with_trunc(self, ns):
        """Copy with branch ``i`` known at least to ``t^ns[i]``."""
        if isinstance(ns, int):
            ns = (ns,) * self.r
        branches = [b.extend(n) for b, n in zip(self.branches, ns)]
        if all(nb is b for nb, b in zip(branches, self.branches)):
            return self
        factors = self.branch_factors
        if factors is not None:
            factors = tuple(
                (reconstruct_factor(*nb.params) if not f.exact and nb is not b else f)
                for f, nb, b in zip(factors, branches, self.branches)
            )
        defining = self.defining
        if defining is not None and factors is not None:
            swap = {id(old): new for old, new in zip(self.branch_factors, factors)}
            defining = tuple(swap.get(id(f), f) for f in defining)
        c = Curve(
            branches,
            factors,
            defining,
            self.poly,
            self.equations,
            self.coordinate_change,
            self.origin,
        )
        c._im_cache = self._im_cache
        return c

    def sub_curve(self, indices):
        """Curve formed by the branches ``indices`` in the given order."""
        indices = tuple(indices)
        branches = [self.branches[i] for i in indices]
        factors = None
        defining = None
        poly = None
        if self.branch_factors is not None:
            factors = [self.branch_factors[i] for i in indices]
            defining = factors
            if all(f.exact for f in factors):
                poly = MPoly.const(1, 2)
                for f in factors:
                    poly = poly * f.poly
        c = Curve(branches, factors, defining, poly, None, self.coordinate_change, self.origin)
        sub_cache = {}
        for (j, k), v in self._im_cache.items():
            if j in indices and k in indices:
                sub_cache[(indices.index(j), indices.index(k))] = v
        c._im_cache = sub_cache
        return c

    def reorder(self, order):
        """Same curve with the branches permuted; ``order`` lists old indices."""
        c = self.sub_curve(order)
        c.poly = self.poly
        c.equations = self.equations
        if self.defining is not None and self.origin != "branches":
            c.defining = self.defining
        return c

    def f_series(self, i, dx=0, dy=0):
        """``d^dx/dX d^dy/dY f`` along branch ``i`` (plane curves)."""
        if self.defining is None:
            raise MissingFactor("the defining equation of the curve is not available")
        if dx + dy > 1:
            raise ValueError("only first partial derivatives are supported")
        params = self.branches[i].params
        vals = [fac.evaluate(params) for fac in self.defining]
        if dx == 0 and dy == 0:
            out = vals[0]
            for v in vals[1:]:
                out = out * v
            return out
        total = None
        for j, fac in enumerate(self.defining):
            term = fac.evaluate(params, dx, dy)
            for k, v in enumerate(vals):
                if k != j:
                    term = term * v
            total = term if total is None else total + term
        return total

    def __repr__(self):
        return f"Curve(r={self.r}, n={self.n}, branches={list(self.branches)!r})"


def value_of_function(c, g):
    """Value vector of the polynomial ``g`` (TOP when above truncation)."""
    if g.nvars != c.n:
        raise InputError(f"polynomial has {g.nvars} variables, curve has {c.n} coordinates")
    return tuple(_order_or_top(mpoly_eval_series(g, b.params)) for b in c.branches)


def differential_images(c):
    """Images of ``dx_1, ..., dx_n``: for each l the tuple ``(x_l'(t_i) t_i)_i``."""
    return [
        tuple(b.params[l].derivative().shift(1) for b in c.branches)
        for l in range(c.n)
    ]


def intersection_multiplicity(c, j, k):
    """``ord_t`` of the factor of branch ``j`` along branch ``k``."""
    if j == k:
        raise ValueError("intersection multiplicity needs two distinct branches")
    if c.n != 2:
        raise MissingFactor("intersection multiplicities are computed for plane curves")
    if c.branch_factors is None:
        raise MissingFactor("no implicit factors are available for this curve")
    key = (min(j, k), max(j, k))
    hit = c._im_cache.get(key)
    if hit is not None:
        return hit
    # Evaluate the factor judged more reliable: an exact one when available.
    fj, fk = c.branch_factors[j], c.branch_factors[k]
    if not fj.exact and fk.exact:
        j, k = k, j
    bj, bk = c.branches[j], c.branches[k]
    n = max(bj.trunc, bk.trunc, 16)
    while True:
        ej, ek = bj.extend(n), bk.extend(n)
        fac = c.branch_factors[j]
        if not fac.exact:
            fac = reconstruct_factor(*ej.params)
        o = fac.evaluate(ek.params).ord()
        if o is not ABOVE_TRUNC:
            c._im_cache[key] = o
            return o
        if n >= INTERSECTION_CAP:
            raise NonFinite(
                f"branches {j} and {k} agree beyond order {n}: not a reduced curve"
            )
        n *= 2


def _transversal_shift_plane(branches):
    """Smallest ``a >= 0`` with ``x + a y`` of order ``min(v(x), v(y))`` on all branches."""
    for a in range(0, 64):
        ok = True
        for b in branches:
            x, y = b.params
            vals = [v for v in b.values() if v is not None]
            m = min(vals)
            s = x + y * a if a else x
            if s.ord() != m:
                ok = False
                break
        if ok:
            return a
    raise NotTransversal("no transversal coordinate found among x + a*y, a < 64")


def curve_from_branches(coords_list, equations=None, labels=None):
    """Curve from explicit parametrizations (lists of Series per branch)."""
    branches = []
    for idx, coords in enumerate(coords_list):
        label = labels[idx] if labels else f"b{idx + 1}"
        # polynomial input is exact; a common truncation keeps "0" from looking unknown
        n0 = max([PARAM_TRUNC] + [s.trunc for s in coords])
        branches.append(Branch([_pad(s, n0) for s in coords], label))
    ns = {b.n for b in branches}
    if len(ns) != 1:
        raise InputError("all branches must have the same number of coordinates")
    n = ns.pop()
    seen = set()
    for b in branches:
        if b.params in seen:
            raise NotSquareFree(f"branch {b.label!r} is repeated")
        seen.add(b.params)
    if n == 2:
        a = _transversal_shift_plane(branches)
        if a:
            branches = [
                b.map(lambda p, a=a: (p[0] + p[1] * a, p[1])) for b in branches
            ]
        factors = [reconstruct_factor(*b.params) for b in branches]
        curve = Curve(branches, factors, factors, None, equations, a, "branches")
        for j in range(len(branches)):
            for k in range(j + 1, len(branches)):
                try:
                    intersection_multiplicity(curve, j, k)
                except NonFinite:
                    raise NotSquareFree(
                        f"branches {branches[j].label!r} and {branches[k].label!r} "
                        "coincide up to reparametrization"
                    ) from None
        return curve
    for b in branches:
        vals = [v for v in b.values() if v is not None]
        if b.values()[0] != min(vals):
            raise NotTransversal(
                f"first coordinate is not transversal on branch {b.label!r}; "
                "choose coordinates with x_1 of minimal order"
            )
    return Curve(branches, None, None, None, equations, 0, "branches")

