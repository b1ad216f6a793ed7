"""Value sets of finitely generated modules inside a finite coefficient window.

The image of a module ``M`` in ``prod_i k[t_i]/(t_i^(box_i+1))`` is spanned by
the products ``monomial * generator`` whose value is inside the box on some
branch.  Writing ``V(gamma)`` for the elements vanishing below ``gamma`` and
``d(gamma) = dim V(gamma)``, a vector ``beta`` is a value of ``M`` iff
``d(beta + e_i) < d(beta)`` for every ``i``; this holds over any infinite
field because a vector space is never a finite union of proper subspaces.

Coordinates are stored relative to ``lo`` (the componentwise minimum order
of the generators) and the extra index ``box_i + 1 - lo_i`` stands for TOP,
"beyond the window".  With the window reaching past ``conductor + m`` (m the
multiplicity vector) the clipped picture is exact: coordinates at or above
the conductor do not influence membership.
"""

import itertools

import numpy as np

from .curve import differential_images
from .errors import InputError, MissingFactor, NoConductorInWindow, TruncationTooSmall
from .series import ABOVE_TRUNC, TOP, Series, monomials_below

__all__ = [
    "ValueSet",
    "WindowBasis",
    "dimension_grid",
    "gamma_set",
    "gaps",
    "jacobian_value_set",
    "lambda_set",
    "module_window_span",
    "project",
    "subspace_dim_at",
    "value_set_of_module",
]

MAX_RETRIES = 3


class WindowBasis:
    """Echelon basis of a module's image in the coefficient window.

    Rows are sparse ``{column: coefficient}`` maps; column ``offsets[i] + d -
    lo[i]`` holds the coefficient of ``t_i^d``.  Pivots (least columns) are
    pairwise distinct, so rows with an entry on branch 0 have pairwise
    distinct branch-0 orders.
    """

    def __init__(self, rows, lo, box):
        self.rows = rows
        self.lo = tuple(lo)
        self.box = tuple(box)
        self.widths = tuple(max(b - l + 1, 0) for l, b in zip(self.lo, self.box))
        self.offsets = tuple(itertools.accumulate((0,) + self.widths[:-1]))

    @property
    def r(self):
        return len(self.lo)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def positions(self):
        return [(i, d) for i in range(self.r) for d in range(self.lo[i], self.box[i] + 1)]

    def pivots(self):
        return sorted(self._position(min(row)) for row in self.rows)

    def _position(self, col):
        for i in reversed(range(self.r)):
            if col >= self.offsets[i] and self.widths[i]:
                return (i, self.lo[i] + col - self.offsets[i])
        raise IndexError(col)

    @property
    def elements(self):
        out = []
        for row in self.rows:
            comps = []
            for i in range(self.r):
                coeffs = {}
                for col, v in row.items():
                    k = col - self.offsets[i]
                    if 0 <= k < self.widths[i]:
                        coeffs[self.lo[i] + k] = v
                comps.append(Series(coeffs, self.box[i]))
            out.append(tuple(comps))
        return out


def _reduce_into(pivots, row):
    """Reduce ``row`` against ``pivots``; store it if something survives."""
    while row:
        c = min(row)
        p = pivots.get(c)
        if p is None:
            pivots[c] = row
            return True
        f = row[c] / p[c]
        for k, v in p.items():
            nv = row.get(k, 0) - f * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)
    return False


def _gens_orders(gens, r):
    out = []
    for g in gens:
        if len(g) != r:
            raise InputError("generator has the wrong number of branch components")
        out.append(tuple(None if s.ord() is ABOVE_TRUNC else s.ord() for s in g))
    return out


def module_window_span(c, gens, box, lo=None):
    """Echelon basis of the span of ``monomial * g`` inside the window ``box``."""
    r = c.r
    box = tuple(box)
    gens = [tuple(g) for g in gens]
    if not gens:
        raise InputError("a module needs at least one generator")
    orders = _gens_orders(gens, r)
    if lo is None:
        lo = []
        for i in range(r):
            finite = [o[i] for o in orders if o[i] is not None]
            lo.append(min(finite) if finite else box[i] + 1)
    lo = tuple(min(l, b + 1) for l, b in zip(lo, box))
    for i, b in enumerate(c.branches):
        if b.trunc < box[i]:
            raise TruncationTooSmall(
                f"branch {i} known to t^{b.trunc}, window needs t^{box[i]}"
            )
        for g in gens:
            if g[i].trunc < box[i] and g[i].ord() is ABOVE_TRUNC:
                raise TruncationTooSmall(
                    f"generator vanishes to t^{g[i].trunc} on branch {i}, window needs t^{box[i]}"
                )
            if g[i].trunc < box[i]:
                raise TruncationTooSmall(
                    f"generator known to t^{g[i].trunc} on branch {i}, window needs t^{box[i]}"
                )
    basis = WindowBasis([], lo, box)
    values = [c.branches[i].values() for i in range(r)]
    params = [[s.truncate(box[i]) for s in c.branches[i].params] for i in range(r)]
    mono_cache = [dict() for _ in range(r)]

    def mono(i, e):
        cache = mono_cache[i]
        s = cache.get(e)
        if s is None:
            if not any(e):
                s = Series.const(1, box[i])
            else:
                l = max(k for k, v in enumerate(e) if v)
                prev = list(e)
                prev[l] -= 1
                s = mono(i, tuple(prev)) * params[i][l]
                if s.trunc > box[i]:
                    s = s.truncate(box[i])
            cache[e] = s
        return s

    pivots = {}
    for g, og in zip(gens, orders):
        bounds = [box[i] + 1 - og[i] if og[i] is not None else 0 for i in range(r)]
        gt = [g[i].truncate(box[i]) for i in range(r)]
        for e in monomials_below(values, bounds, c.n):
            row = {}
            for i in range(r):
                if og[i] is None or basis.widths[i] == 0:
                    continue
                v = sum(k * values[i][l] for l, k in enumerate(e) if k and values[i][l] is not None)
                if any(k and values[i][l] is None for l, k in enumerate(e)):
                    continue
                if v + og[i] > box[i]:
                    continue
                prod = mono(i, e) * gt[i]
                off = basis.offsets[i] - lo[i]
                dense = prod.dense
                for d in range(max(lo[i], v + og[i]), min(box[i], prod.trunc) + 1):
                    cd = dense[d]
                    if cd:
                        row[off + d] = cd
            if row:
                _reduce_into(pivots, row)
    basis.rows = [pivots[k] for k in sorted(pivots)]
    return basis


def _branch0_order(basis, row):
    w0 = basis.widths[0]
    m = min(row)
    return m if m < w0 else w0


def subspace_dim_at(basis, gamma):
    """``dim {a in span : v(a) >= gamma}`` by exact elimination."""
    gamma = tuple(gamma)
    cols = []
    for i in range(basis.r):
        g = basis.box[i] + 1 if gamma[i] is TOP else gamma[i]
        g = min(max(g, basis.lo[i]), basis.box[i] + 1)
        cols.extend(basis.offsets[i] + k for k in range(g - basis.lo[i]))
    colset = set(cols)
    piv = {}
    rank = 0
    for row in basis.rows:
        part = {k: v for k, v in row.items() if k in colset}
        if _reduce_into(piv, part):
            rank += 1
    return basis.dim - rank


def dimension_grid(basis):
    """``d(gamma)`` for every ``gamma`` in the window, as an integer array.

    Sweeps the last coordinates recursively, maintaining a basis of the
    current subspace in which rows are echelonized on branch 0; there
    ``d`` along the branch-0 axis is a reverse cumulative count of orders.
    """
    r = basis.r
    w = basis.widths
    shape = tuple(x + 1 for x in w)
    grid = np.zeros(shape, dtype=np.int64)
    items = [(_branch0_order(basis, row), row) for row in basis.rows]

    def update(items, col):
        hits = [k for k, (_, row) in enumerate(items) if col in row]
        if not hits:
            return items
        pk = max(hits, key=lambda k: items[k][0])
        prow = items[pk][1]
        pv = prow[col]
        out = []
        for k, (o, row) in enumerate(items):
            if k == pk:
                continue
            if col in row:
                f = row[col] / pv
                row = dict(row)
                for kk, v in prow.items():
                    nv = row.get(kk, 0) - f * v
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
            out.append((o, row))
        return out

    def rec(items, k, idx):
        if k == 0:
            cnt = np.zeros(w[0] + 2, dtype=np.int64)
            for o, _ in items:
                cnt[o] += 1
            grid[(slice(None),) + idx] = np.cumsum(cnt[::-1])[::-1][: w[0] + 1]
            return
        cur = items
        for g in range(w[k] + 1):
            rec(cur, k - 1, (g,) + idx)
            if g < w[k]:
                cur = update(cur, basis.offsets[k] + g)

    rec(items, r - 1, ())
    return grid


def _suffix_and(a, axis):
    return np.flip(np.logical_and.accumulate(np.flip(a, axis), axis=axis), axis)


class ValueSet:
    """Clipped value set on the window ``[lo, box]`` plus a TOP layer.

    ``grid[idx]`` tells whether ``lo + idx`` belongs to the set, with index
    ``box_i + 1 - lo_i`` in coordinate ``i`` meaning "any value above box_i".
    """

    def __init__(self, grid, lo, box, certified=False):
        self.grid = np.asarray(grid, dtype=bool)
        self.lo = tuple(int(x) for x in lo)
        self.box = tuple(int(x) for x in box)
        self.certified = certified
        if self.grid.shape != tuple(b - l + 2 for l, b in zip(self.lo, self.box)):
            raise ValueError("grid shape does not match the window")
        self._conductor = None
        self._conductor_done = False

    @classmethod
    def from_dimensions(cls, dims, lo, box):
        r = dims.ndim
        member = np.ones(dims.shape, dtype=bool)
        for ax in range(r):
            lower = [slice(None)] * r
            upper = [slice(None)] * r
            lower[ax] = slice(0, -1)
            upper[ax] = slice(1, None)
            ok = np.ones(dims.shape, dtype=bool)
            ok[tuple(lower)] = dims[tuple(lower)] > dims[tuple(upper)]
            member &= ok
        return cls(member, lo, box)

    @property
    def r(self):
        return self.grid.ndim

    @property
    def top(self):
        return tuple(b + 1 for b in self.box)

    def _index(self, beta):
        idx = []
        for i, b in enumerate(beta):
            if b is TOP or b > self.box[i]:
                idx.append(self.box[i] + 1 - self.lo[i])
            elif b < self.lo[i]:
                return None
            else:
                idx.append(b - self.lo[i])
        return tuple(idx)

    def _point(self, idx):
        return tuple(
            TOP if k == self.box[i] + 1 - self.lo[i] else self.lo[i] + int(k)
            for i, k in enumerate(idx)
        )

    def __contains__(self, beta):
        if len(beta) != self.r:
            raise ValueError("value vector has the wrong length")
        idx = self._index(beta)
        return idx is not None and bool(self.grid[idx])

    @property
    def inf(self):
        out = []
        for ax in range(self.r):
            other = tuple(a for a in range(self.r) if a != ax)
            line = self.grid.any(axis=other) if other else self.grid
            nz = np.flatnonzero(line)
            out.append(self._point((nz[0],) * self.r)[ax] if len(nz) else TOP)
        return tuple(out)

    @property
    def conductor(self):
        """Least ``c`` with ``c + N^r`` inside the set, if visible in the window."""
        if not self._conductor_done:
            u = self.grid.copy()
            for ax in range(self.r):
                u = _suffix_and(u, ax)
            c = None
            if u.any():
                pts = np.argwhere(u)
                cand = tuple(int(x) for x in pts.min(axis=0))
                if u[cand] and all(k < self.box[i] + 1 - self.lo[i] or
                                   self.box[i] + 1 - self.lo[i] == 0
                                   for i, k in enumerate(cand)):
                    c = self._point(cand)
                    c = tuple(self.box[i] + 1 if v is TOP else v for i, v in enumerate(c))
            self._conductor = c
            self._conductor_done = True
        return self._conductor

    def points(self):
        """All clipped members (TOP for coordinates above the box)."""
        return [self._point(tuple(p)) for p in np.argwhere(self.grid)]

    def finite_points(self, upto=None):
        """Members with every coordinate below ``upto`` (default: conductor)."""
        upto = self.conductor if upto is None else upto
        sl = tuple(slice(0, max(u - l, 0)) for u, l in zip(upto, self.lo))
        sub = self.grid[sl]
        return [tuple(int(k) + self.lo[i] for i, k in enumerate(p)) for p in np.argwhere(sub)]

    def region_mask(self, lo, hi):
        """Membership of every integer point of ``[lo, hi]`` as a boolean array."""
        idx = []
        for i in range(self.r):
            vals = np.arange(lo[i], hi[i] + 1)
            k = np.clip(vals, None, self.box[i] + 1) - self.lo[i]
            idx.append(k)
        below = [k < 0 for k in idx]
        safe = [np.clip(k, 0, None) for k in idx]
        mask = self.grid[np.ix_(*safe)].copy()
        for ax, b in enumerate(below):
            shape = [1] * self.r
            shape[ax] = len(b)
            mask &= ~b.reshape(shape)
        return mask

    def shifted(self, vec):
        """The translate ``E + vec``."""
        lo = tuple(l + v for l, v in zip(self.lo, vec))
        box = tuple(b + v for b, v in zip(self.box, vec))
        return ValueSet(self.grid, lo, box, self.certified)

    def as_list(self):
        """One-dimensional sets: members below the conductor."""
        if self.r != 1:
            raise ValueError("as_list is for one-dimensional value sets")
        c = self.conductor
        return [p[0] for p in self.finite_points((c[0],))] if c is not None else None

    def __eq__(self, other):
        if not isinstance(other, ValueSet) or other.r != self.r:
            return NotImplemented
        c1, c2 = self.conductor, other.conductor
        if c1 is None or c2 is None or c1 != c2:
            return False
        lo = tuple(min(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(v + 1 for v in c1)
        return bool(np.array_equal(self.region_mask(lo, hi), other.region_mask(lo, hi)))

    __hash__ = None

    def describe(self):
        if self.r == 1:
            lst = self.as_list()
            c = self.conductor
            if lst is None:
                return "{?}"
            return "{" + ",".join(str(v) for v in lst + [c[0]]) + ",...}"
        return f"ValueSet(r={self.r}, inf={self.inf}, conductor={self.conductor})"

    def __repr__(self):
        return self.describe()


def project(e, J):
    """Value set of the projection onto the branches ``J`` (in the given order)."""
    J = tuple(J)
    if not J:
        raise ValueError("projection needs a nonempty index set")
    others = tuple(a for a in range(e.r) if a not in J)
    g = e.grid.any(axis=others) if others else e.grid
    # axes left in increasing order; reorder to J
    remaining = [a for a in range(e.r) if a in J]
    perm = [remaining.index(j) for j in J]
    g = np.transpose(g, perm)
    return ValueSet(g, [e.lo[j] for j in J], [e.box[j] for j in J], e.certified)


def gaps(e):
    """Integers between ``inf`` and the conductor missing from a 1-D set."""
    if e.r != 1:
        raise ValueError("gaps are defined for one-dimensional value sets")
    c = e.conductor
    if c is None:
        raise NoConductorInWindow("conductor not visible in the window")
    lo = e.inf[0]
    members = set(e.as_list())
    return sorted(z for z in range(lo, c[0]) if z not in members)


def _certified(e, m):
    c = e.conductor
    return c is not None and all(ci + mi <= bi + 1 for ci, mi, bi in zip(c, m, e.box))


def truncation_for(c, box):
    """Default branch truncations for a window: ``box_i + max v_i + 8``."""
    out = []
    for b, bx in zip(c.branches, box):
        vals = [v for v in b.values() if v is not None]
        out.append(bx + max(vals) + 8)
    return tuple(out)


def value_set_of_module(c, gens, box, slack=0):
    """Certified value set of the module generated by ``gens``.

    ``gens`` is either a list of r-tuples of Series or a callable producing
    them from a curve (so that they can be recomputed at a larger
    truncation).  The window is doubled when the conductor cannot be
    certified, at most ``MAX_RETRIES`` times.
    """
    make = gens if callable(gens) else None
    m = c.multiplicities()
    box = tuple(b + slack for b in box)
    for _ in range(MAX_RETRIES + 1):
        cur = c.with_trunc(truncation_for(c, box)) if make is not None else c
        for _ in range(4):
            try:
                g = make(cur) if make is not None else gens
                basis = module_window_span(cur, g, box)
                break
            except TruncationTooSmall:
                if make is None:
                    raise
                cur = cur.with_trunc(tuple(2 * t for t in cur.trunc_policy))
        else:
            raise TruncationTooSmall("could not reach the truncation required by the window")
        e = ValueSet.from_dimensions(dimension_grid(basis), basis.lo, box)
        if _certified(e, m):
            e.certified = True
            return e
        box = tuple(2 * b + 1 for b in box)
    raise NoConductorInWindow(
        f"conductor not certified after {MAX_RETRIES} window enlargements (last box {box})"
    )


def _ones(cur):
    return [tuple(Series.const(1, b.trunc) for b in cur.branches)]


def _differentials(cur):
    return differential_images(cur)


def _jacobian_gens(cur):
    return [
        tuple(cur.f_series(i, dx=1) for i in range(cur.r)),
        tuple(cur.f_series(i, dy=1) for i in range(cur.r)),
    ]


def branch_conductor_guess(c, i):
    """Upper estimate for ``c(Gamma_i)``, exact for plane branches with a factor."""
    b = c.branches[i]
    if c.n == 2 and c.branch_factors is not None:
        fac = c.branch_factors[i]
        n = b.trunc
        for _ in range(6):
            bb = b.extend(n)
            if not fac.exact:
                from .curve import reconstruct_factor

                fac = reconstruct_factor(*bb.params)
            o = fac.evaluate(bb.params, dy=1).ord()
            if o is not ABOVE_TRUNC:
                return o - bb.values()[0] + 1
            n = 2 * n + 16
    vals = [v for v in b.values() if v is not None]
    return 4 * max(vals) * max(1, len(vals) - 1)


def gamma_box(c):
    """Initial window for Gamma: exact conductor bound for plane curves."""
    from .curve import intersection_multiplicity

    m = c.multiplicities()
    ci = [branch_conductor_guess(c, i) for i in range(c.r)]
    if c.n == 2 and c.branch_factors is not None:
        box = []
        for i in range(c.r):
            inter = sum(intersection_multiplicity(c, i, j) for j in range(c.r) if j != i)
            box.append(ci[i] + inter + m[i] - 1)
        return tuple(box)
    total = sum(ci)
    return tuple(2 * total + mi for mi in m)


def gamma_set(c, box=None, slack=0):
    """Semigroup of values ``v(O)``."""
    if box is None:
        box = gamma_box(c)
    return value_set_of_module(c, _ones, box, slack)


def lambda_set(c, box=None, gamma=None, slack=0):
    """Values of the differentials modulo torsion, ``v(Omega / T)``."""
    if box is None:
        gamma = gamma if gamma is not None else gamma_set(c)
        m = c.multiplicities()
        box = tuple(ci + mi - 1 for ci, mi in zip(gamma.conductor, m))
    return value_set_of_module(c, _differentials, box, slack)


def jacobian_value_set(c, box=None, gamma=None, lam=None, slack=0):
    """Values of the Jacobian ideal ``(f_X, f_Y)`` of a plane curve."""
    if c.n != 2 or c.defining is None:
        raise MissingFactor("the Jacobian value set needs a plane curve with its equation")
    if box is None:
        gamma = gamma if gamma is not None else gamma_set(c)
        lam = lam if lam is not None else lambda_set(c, gamma=gamma)
        m = c.multiplicities()
        box = tuple(
            cg + cl - 1 + mi - 1
            for cg, cl, mi in zip(gamma.conductor, lam.conductor, m)
        )
    return value_set_of_module(c, _jacobian_gens, box, slack)
