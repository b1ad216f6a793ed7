"""Exact rational scalars, truncated power series and polynomials.

Scalars are :class:`gmpy2.mpq` values: arbitrary precision, always reduced,
positive denominator.  A :class:`Series` stores its coefficients densely up
to and including degree ``trunc``; everything above ``trunc`` is unknown
rather than zero, and every operation propagates that distinction so that a
reported coefficient is always a certified one.
"""

from fractions import Fraction
from functools import total_ordering
from numbers import Integral

import gmpy2
from gmpy2 import mpq

from .errors import TruncationTooSmall

__all__ = [
    "ABOVE_TRUNC",
    "TOP",
    "MPoly",
    "Series",
    "mpoly_eval_series",
    "scalar",
    "series_add",
    "series_derivative",
    "series_mul",
    "series_ord",
]

_ZERO = mpq(0)
_ONE = mpq(1)


@total_ordering
class _Beyond:
    """Symbol that compares strictly greater than every integer."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, _Beyond)

    def __hash__(self):
        return hash(("_Beyond", self.name))

    def __reduce__(self):
        return (_beyond, (self.name,))


def _beyond(name):
    return ABOVE_TRUNC if name == "ABOVE_TRUNC" else TOP


ABOVE_TRUNC = _Beyond("ABOVE_TRUNC")
# Value coordinate clipped at a window bound.  Shares the ordering of
# ABOVE_TRUNC so that orders and values mix freely in comparisons.
TOP = _Beyond("TOP")


def scalar(value):
    """Coerce ``value`` to an exact rational."""
    if isinstance(value, type(_ZERO)):
        return value
    if isinstance(value, (Integral, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not accepted")
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return mpq(int(num), int(den))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


class Series:
    """Truncated univariate power series ``sum c_d t^d`` for ``d <= trunc``."""

    __slots__ = ("_c", "trunc", "_hash")

    def __init__(self, coeffs=(), trunc=0):
        if trunc < -1:
            raise ValueError("trunc must be >= -1")
        dense = [_ZERO] * (trunc + 1)
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        for d, c in items:
            if d < 0:
                raise ValueError("negative exponents are not supported")
            if d <= trunc:
                dense[d] = scalar(c)
        self._c = tuple(dense)
        self.trunc = trunc
        self._hash = None

    @classmethod
    def _raw(cls, dense, trunc):
        s = cls.__new__(cls)
        s._c = dense if isinstance(dense, tuple) else tuple(dense)
        s.trunc = trunc
        s._hash = None
        return s

    @classmethod
    def const(cls, c, trunc):
        return cls({0: c}, trunc)

    @classmethod
    def monomial(cls, degree, trunc, c=1):
        return cls({degree: c}, trunc)

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self):
        """Nonzero coefficients as ``{degree: mpq}``."""
        return {d: c for d, c in enumerate(self._c) if c}

    @property
    def dense(self):
        return self._c

    def coeff(self, d):
        if d > self.trunc:
            raise TruncationTooSmall(
                f"coefficient of t^{d} requested, series known up to t^{self.trunc}"
            )
        return self._c[d] if d >= 0 else _ZERO

    def ord(self):
        for d, c in enumerate(self._c):
            if c:
                return d
        return ABOVE_TRUNC

    def _low(self):
        """Lower bound for the true order, finite even for a zero window."""
        o = self.ord()
        return self.trunc + 1 if o is ABOVE_TRUNC else o

    def is_zero(self):
        return not any(self._c)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(other, self.trunc)
        n = min(self.trunc, other.trunc)
        a, b = self._c, other._c
        return Series._raw(tuple(a[d] + b[d] for d in range(n + 1)), n)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(tuple(-c for c in self._c), self.trunc)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.const(other, self.trunc)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = scalar(other)
            return Series._raw(tuple(c * v for v in self._c), self.trunc)
        n = min(self.trunc + other._low(), other.trunc + self._low())
        out = [_ZERO] * (n + 1)
        bnz = [(j, v) for j, v in enumerate(other._c) if v]
        for i, u in enumerate(self._c):
            if not u or i > n:
                continue
            for j, v in bnz:
                k = i + j
                if k > n:
                    break
                out[k] += u * v
        return Series._raw(tuple(out), n)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, Integral) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = Series.const(1, self.trunc + (k - 1) * self._low() if k else self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self):
        """Termwise d/dt; the truncation drops by one."""
        c = self._c
        return Series._raw(tuple(c[d] * d for d in range(1, len(c))), self.trunc - 1)

    def shift(self, k):
        """Multiply by t^k."""
        return Series._raw((_ZERO,) * k + self._c, self.trunc + k)

    def truncate(self, n):
        if n > self.trunc:
            raise TruncationTooSmall(f"cannot raise truncation {self.trunc} to {n}")
        return Series._raw(self._c[: n + 1], n)

    def scale_variable(self, a):
        """Substitute t -> a*t."""
        a = scalar(a)
        out, p = [], _ONE
        for c in self._c:
            out.append(c * p)
            p *= a
        return Series._raw(tuple(out), self.trunc)

    def inverse(self):
        """Multiplicative inverse of a unit series."""
        c0 = self._c[0] if self._c else _ZERO
        if not c0:
            raise ZeroDivisionError("series is not a unit")
        n = self.trunc
        inv0 = 1 / c0
        out = [inv0] + [_ZERO] * n
        a = self._c
        for d in range(1, n + 1):
            acc = _ZERO
            for j in range(1, d + 1):
                if a[j]:
                    acc += a[j] * out[d - j]
            out[d] = -acc * inv0
        return Series._raw(tuple(out), n)

    def root(self, q, leading=None):
        """q-th root of a unit series, given (or deriving) the root of c_0."""
        a = self._c
        if not a or not a[0]:
            raise ZeroDivisionError("series is not a unit")
        if leading is None:
            leading = rational_root(a[0], q)
            if leading is None:
                raise ValueError(f"constant term {a[0]} is not a {q}-th power in Q")
        # J.C.P. Miller's recurrence for a^alpha with alpha = 1/q.
        alpha = mpq(1, q)
        n = self.trunc
        r = [scalar(leading)] + [_ZERO] * n
        for k in range(1, n + 1):
            acc = _ZERO
            for j in range(1, k + 1):
                if a[j]:
                    acc += ((alpha + 1) * j - k) * a[j] * r[k - j]
            r[k] = acc / (k * a[0])
        return Series._raw(tuple(r), n)

    def compose(self, inner):
        """self(inner(t)) for an inner series of positive order."""
        lo = inner._low()
        if lo < 1:
            raise ValueError("inner series must have positive order")
        n = min(lo * (self.trunc + 1) - 1, inner.trunc)
        result = [_ZERO] * (n + 1)
        result[0] = self._c[0] if self._c else _ZERO
        power = None
        for d in range(1, min(self.trunc, n // lo) + 1):
            power = inner if power is None else power * inner
            if power.trunc > n:
                power = power.truncate(n)
            c = self._c[d]
            if c:
                for k, v in enumerate(power._c):
                    if v:
                        result[k] += c * v
        return Series._raw(tuple(result), n)

    def reversion(self):
        """Compositional inverse of a series of order exactly one."""
        if self.ord() != 1:
            raise ValueError("reversion needs a series of order one")
        n = self.trunc
        # Newton iteration on g with self(g(t)) = t.
        a1 = self._c[1]
        g = Series({1: 1 / a1}, n)
        for _ in range(n.bit_length() + 1):
            h = self.compose(g) - Series({1: 1}, n)
            if h.is_zero():
                break
            dg = self.derivative().compose(g)
            g = g - h * dg.truncate(min(dg.trunc, n)).inverse()
            g = g.truncate(min(g.trunc, n))
        return g

    # -- dunder -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.trunc == other.trunc and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.trunc, self._c))
        return self._hash

    def __repr__(self):
        return f"Series({format_series(self)}, trunc={self.trunc})"


def format_series(s, var="t"):
    parts = []
    for d, c in s.coeffs.items():
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if d == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def rational_root(c, q):
    """The rational q-th root of ``c`` if one exists (real root for odd q)."""
    c = scalar(c)
    if c == 0:
        return _ZERO
    sign = 1
    if c < 0:
        if q % 2 == 0:
            return None
        sign, c = -1, -c
    rn, exact_n = gmpy2.iroot(gmpy2.mpz(c.numerator), q)
    rd, exact_d = gmpy2.iroot(gmpy2.mpz(c.denominator), q)
    if exact_n and exact_d:
        return mpq(sign * rn, rd)
    return None


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_derivative(a):
    return a.derivative()


def series_ord(a):
    return a.ord()


class MPoly:
    """Polynomial in ``nvars`` variables with exact rational coefficients."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars=2):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            c = scalar(c)
            if c:
                clean[e] = clean.get(e, _ZERO) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, _ZERO) + c
        return MPoly({e: c for e, c in t.items() if c}, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, _ZERO) + c1 * c2
        return MPoly({e: c for e, c in t.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = MPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MPoly(t, self.nvars)

    def degree(self, i=None):
        if not self.terms:
            return -1
        if i is None:
            return max(sum(e) for e in self.terms)
        return max(e[i] for e in self.terms)

    def order(self):
        """Lowest total degree of a term (the multiplicity at the origin)."""
        if not self.terms:
            raise ValueError("zero polynomial has no order")
        return min(sum(e) for e in self.terms)

    def initial_form(self):
        m = self.order()
        return MPoly({e: c for e, c in self.terms.items() if sum(e) == m}, self.nvars)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, _ZERO)

    def compose(self, polys):
        """Substitute variable i by ``polys[i]``."""
        result = MPoly({}, polys[0].nvars)
        cache = {}
        for e, c in self.terms.items():
            term = MPoly.const(c, polys[0].nvars)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = polys[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def eval_series(self, args):
        return mpoly_eval_series(self, args)

    def __call__(self, *values):
        total = _ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(values, e):
                v *= scalar(x) ** k
            total += v
        return total

    def __repr__(self):
        return f"MPoly({format_mpoly(self)})"


def format_mpoly(p, names=None):
    if names is None:
        names = ["x", "y", "z"][: p.nvars] if p.nvars <= 3 else [f"x{i + 1}" for i in range(p.nvars)]
    if not p.terms:
        return "0"
    parts = []
    for e, c in sorted(p.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-x for x in ec[0]))):
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def mpoly_eval_series(p, args):
    """Substitute each variable by a series, exact to the common reliable trunc."""
    if len(args) != p.nvars:
        raise ValueError(f"expected {p.nvars} series, got {len(args)}")
    base_trunc = min(a.trunc for a in args)
    if not p.terms:
        return Series((), base_trunc)
    powers = [dict() for _ in args]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            if k == 0:
                cache[k] = None
            elif k == 1:
                cache[k] = args[i]
            else:
                half = power(i, k // 2)
                sq = half * half
                cache[k] = sq * args[i] if k % 2 else sq
        return cache[k]

    acc = None
    for e, c in p.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                pw = power(i, k)
                term = pw if term is None else term * pw
        if term is None:
            term = Series.const(c, base_trunc)
        else:
            term = term * c
        acc = term if acc is None else acc + term
    return acc


def monomials_below(values, bounds, nvars):
    """Exponent vectors whose value is below the bound on at least one branch.

    ``values[i][l]`` is the (positive) order of variable l on branch i and
    ``bounds[i]`` the exclusive bound for branch i.  Variables vanishing
    identically on a branch are given the value ``None``.
    """
    out = []

    def step(partial, l, k):
        vals = []
        for i, p in enumerate(partial):
            v = values[i][l]
            if p is None or (v is None and k):
                vals.append(None)
            else:
                vals.append(p + (k * v if k else 0))
        return vals

    def rec(prefix, partial):
        l = len(prefix)
        if l == nvars:
            out.append(tuple(prefix))
            return
        k = 0
        while True:
            vals = step(partial, l, k)
            if not any(v is not None and v < b for v, b in zip(vals, bounds)):
                break
            rec(prefix + [k], vals)
            k += 1

    rec([], [0] * len(bounds))
    return out
