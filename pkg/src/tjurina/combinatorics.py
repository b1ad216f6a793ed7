"""Fibers, maximal points, Theta and the length recursion on value sets.

All computations are vectorized over the clipped grid of a
:class:`~tjurina.value_sets.ValueSet`.  Clipped (TOP) members act as
legitimate "strictly larger" witnesses, which is lossless because maximal
points lie strictly below the conductor.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import GammaTooSmall, NoConductorInWindow
from .series import TOP
from .value_sets import gaps, project

__all__ = [
    "MaximalsReport",
    "fiber",
    "fiber_nonempty_grid",
    "maximals",
    "quotient_length",
    "theta",
]

MAX_BRANCHES = 6


@dataclass(frozen=True)
class MaximalsReport:
    M: frozenset = field(default_factory=frozenset)
    RM: frozenset = field(default_factory=frozenset)
    AM: frozenset = field(default_factory=frozenset)

    def sorted(self, name):
        return sorted(getattr(self, name))


def _strict_suffix_or(a, axis):
    """``out[..., k, ...] = any(a[..., k+1:, ...])`` along ``axis``."""
    acc = np.flip(np.logical_or.accumulate(np.flip(a, axis), axis=axis), axis)
    out = np.zeros_like(a)
    dst = [slice(None)] * a.ndim
    src = [slice(None)] * a.ndim
    dst[axis] = slice(0, -1)
    src[axis] = slice(1, None)
    out[tuple(dst)] = acc[tuple(src)]
    return out


def fiber_nonempty_grid(e, J):
    """Boolean grid: is ``F_J(E, alpha)`` nonempty, for every window point alpha."""
    g = e.grid
    for ax in range(e.r):
        if ax not in J:
            g = _strict_suffix_or(g, ax)
    return g


def fiber(e, alpha, J):
    """Clipped members of ``F_J(E, alpha)``: equal on ``J``, strictly larger elsewhere."""
    J = set(J)
    idx = e._index(alpha)
    if idx is None:
        return set()
    sl = []
    for ax in range(e.r):
        sl.append(slice(idx[ax], idx[ax] + 1) if ax in J else slice(idx[ax] + 1, None))
    sub = e.grid[tuple(sl)]
    out = set()
    for p in np.argwhere(sub):
        full = tuple(
            int(p[ax]) + (idx[ax] if ax in J else idx[ax] + 1) for ax in range(e.r)
        )
        out.add(e._point(full))
    return out


def _points(e, mask):
    return frozenset(tuple(int(k) + e.lo[i] for i, k in enumerate(p)) for p in np.argwhere(mask))


def maximals(e):
    """Maximal, relative maximal and absolute maximal points of ``E``."""
    r = e.r
    if r > MAX_BRANCHES:
        raise ValueError(f"maximal points are supported for at most {MAX_BRANCHES} branches")
    if e.conductor is None:
        raise NoConductorInWindow("maximal points need a certified conductor")
    if r == 1:
        return MaximalsReport()
    inner = np.zeros(e.grid.shape, dtype=bool)
    inner[tuple(slice(0, -1) for _ in range(r))] = True
    mx = e.grid & inner
    cache = {}

    def nonempty(J):
        if J not in cache:
            cache[J] = fiber_nonempty_grid(e, J)
        return cache[J]

    for i in range(r):
        mx &= ~nonempty(frozenset((i,)))
    am = mx.copy()
    rm = mx.copy()
    for k in range(1, r):
        for J in itertools.combinations(range(r), k):
            f = nonempty(frozenset(J))
            am &= ~f
            if k >= 2:
                rm &= f
    return MaximalsReport(_points(e, mx), _points(e, rm), _points(e, am))


def theta(e, i):
    """Distinct last coordinates of ``RM(E_J)`` over ``{i} < J <= [0, i]``, ``i`` last."""
    if not 0 <= i < e.r:
        raise IndexError(f"branch index {i} out of range")
    if i == 0:
        return 0
    values = set()
    earlier = range(i)
    for k in range(1, i + 1):
        for rest in itertools.combinations(earlier, k):
            J = rest + (i,)
            for p in maximals(project(e, J)).RM:
                values.add(p[-1])
    return len(values)


def quotient_length(e, gamma):
    """Length of ``I / I(gamma)`` for ``gamma`` at or above the conductor.

    Recursion on the number of branches: the last branch contributes
    ``gamma_r - inf_r - #gaps(E_r) - Theta_r`` on top of the projection to
    the first ``r - 1`` branches.
    """
    gamma = tuple(gamma)
    c = e.conductor
    if c is None:
        raise NoConductorInWindow("quotient length needs a certified conductor")
    if len(gamma) != e.r:
        raise ValueError("gamma has the wrong length")
    if any(g is TOP or g < ci for g, ci in zip(gamma, c)):
        raise GammaTooSmall(f"gamma {gamma} is not above the conductor {c}")
    total = 0
    cur = e
    for k in range(e.r - 1, -1, -1):
        last = project(cur, (k,))
        total += gamma[k] - last.inf[0] - len(gaps(last))
        if k > 0:
            total -= theta(cur, k)
            cur = project(cur, tuple(range(k)))
    return total
