"""Independent oracles and identity checks.

``tjurina_direct`` computes the colength of ``(f, f_X, f_Y)`` by linear
algebra on monomial multiples in ``k[X,Y]/m^D``.  If the quotient
dimension agrees for ``D`` and ``D + 1`` then ``m^D`` lies in the ideal plus
``m^(D+1)``, hence (Nakayama) in the ideal, so the value is final.
"""

from dataclasses import dataclass
from math import lcm

import flint

from .errors import InconclusiveTruncation, MissingFactor, NonIsolated, NotTransversal
from .series import ABOVE_TRUNC, MPoly, mpoly_eval_series

__all__ = [
    "CheckResult",
    "bordered_determinant",
    "cramer_check",
    "dee_operator",
    "piene_check",
    "pol_identity_check",
    "tjurina_direct",
    "torsion_test",
]

ORACLE_CAP = 160
TORSION_CAP = 4096


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str

    def __post_init__(self):
        if not self.passed and not self.details:
            raise ValueError("a failed check needs details")

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "details": self.details}

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], bool(d["passed"]), d["details"])


def _colength(gens, D):
    """``dim k[X,Y]/(ideal + m^D)`` for the ideal generated by ``gens``."""
    mons = [(a, d - a) for d in range(D) for a in range(d + 1)]
    idx = {m: k for k, m in enumerate(mons)}
    rows = []
    for g in gens:
        og = g.order()
        den = lcm(*(int(c.denominator) for c in g.terms.values()))
        ints = {e: int(c * den) for e, c in g.terms.items()}
        for a, b in mons:
            if a + b + og >= D:
                continue
            rows.append({idx[(i + a, j + b)]: v for (i, j), v in ints.items() if i + j + a + b < D})
    if not rows:
        return len(mons)
    mat = flint.fmpz_mat(len(rows), len(mons))
    for r, row in enumerate(rows):
        for col, v in row.items():
            mat[r, col] = v
    return len(mons) - mat.rank()


def tjurina_direct(f, start=None, cap=ORACLE_CAP):
    """Colength of ``(f, f_X, f_Y)`` in the local ring at the origin."""
    if f.nvars != 2:
        raise ValueError("the oracle handles plane curves")
    gens = [g for g in (f, f.diff(0), f.diff(1)) if not g.is_zero()]
    if f.constant_term() != 0:
        return 0
    if any(g.constant_term() != 0 for g in gens):
        return 0
    D = start if start is not None else max(2 * f.order(), 4)
    while D <= cap:
        q0 = _colength(gens, D)
        q1 = _colength(gens, D + 1)
        if q0 == q1:
            q2 = _colength(gens, D + 2)
            if q2 == q1:
                return q0
        D = max(D + 2, (3 * D + 1) // 2)
    raise NonIsolated(f"colength did not stabilize below degree {cap}")


def _det(matrix):
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else MPoly({}, matrix[0][0].nvars)


def bordered_determinant(eqs, last_row):
    """``det`` of the Jacobian rows of ``eqs`` bordered by ``last_row``."""
    n = eqs[0].nvars
    if len(eqs) != n - 1 or len(last_row) != n:
        raise ValueError(f"need {n - 1} equations and a row of length {n}")
    rows = [[e.diff(l) for l in range(n)] for e in eqs]
    rows.append([r if isinstance(r, MPoly) else MPoly.const(r, n) for r in last_row])
    return _det(rows)


def _gradient(g):
    return [g.diff(l) for l in range(g.nvars)]


def dee_operator(c, g, eqs=None):
    """Bordered Jacobian determinant ``D(g)`` evaluated along each branch.

    With ``eqs=None`` a plane curve uses its own equation through the
    certified series of ``f_X`` and ``f_Y``: ``D(g) = f_X g_Y - f_Y g_X``.
    """
    if eqs is None:
        if c.n != 2 or c.defining is None:
            raise MissingFactor("no equations available for the bordered determinant")
        out = []
        for i, b in enumerate(c.branches):
            gx = mpoly_eval_series(g.diff(0), b.params)
            gy = mpoly_eval_series(g.diff(1), b.params)
            out.append(c.f_series(i, dx=1) * gy - c.f_series(i, dy=1) * gx)
        return tuple(out)
    det = bordered_determinant(list(eqs), _gradient(g))
    return tuple(mpoly_eval_series(det, b.params) for b in c.branches)


def torsion_test(c, omega, eqs):
    """Is ``sum omega_l dx_l`` torsion, i.e. does ``det[J(eqs); omega]`` vanish on the curve?

    A nonzero polynomial ``P`` vanishing to order above ``deg P * prod deg(eqs)``
    along a primitive branch vanishes on it (Bezout), which certifies a zero.
    """
    eqs = list(eqs)
    det = bordered_determinant(eqs, list(omega))
    if det.is_zero():
        return True
    bound = det.degree()
    for e in eqs:
        bound *= e.degree()
    for b in c.branches:
        s = mpoly_eval_series(det, b.params)
        if s.ord() is not ABOVE_TRUNC:
            return False
        if s.trunc < bound:
            if bound > TORSION_CAP:
                raise InconclusiveTruncation(
                    f"determinant vanishes to t^{s.trunc}; certification needs t^{bound}"
                )
            n = b.trunc + (bound - s.trunc) + 1
            for _ in range(8):
                bb = b.extend(n)
                s = mpoly_eval_series(det, bb.params)
                if s.ord() is not ABOVE_TRUNC:
                    return False
                if s.trunc >= bound:
                    break
                n += bound - s.trunc + 1
            else:
                raise InconclusiveTruncation("could not reach the certifying truncation")
    return True


def cramer_check(c, eqs, g):
    """Along each branch ``D(g) x_j' = D(x_j) g'`` for every coordinate ``j``.

    The Jacobian minors are proportional to the tangent vector, which makes
    both sides equal; this ties ``dee_operator`` to the parametrization.
    """
    n = c.n
    dg = dee_operator(c, g, eqs)
    problems = []
    for i, b in enumerate(c.branches):
        gp = mpoly_eval_series(g, b.params).derivative()
        for j in range(n):
            xj = MPoly.var(j, n)
            dxj = dee_operator(c, xj, eqs)[i]
            lhs = dg[i] * b.params[j].derivative()
            rhs = dxj * gp
            diff = lhs - rhs
            if not diff.is_zero():
                problems.append(f"branch {i}, coordinate {j}: mismatch at order {diff.ord()}")
    if problems:
        return CheckResult("cramer", False, "; ".join(problems))
    return CheckResult("cramer", True, f"D(g) x_j' = D(x_j) g' on {c.r} branch(es)")


def piene_check(c, gamma):
    """``ord f_Y = c_i + v_i(x) - 1`` and ``ord f_X = c_i + v_i(y) - 1`` on each branch."""
    if c.n != 2 or c.defining is None:
        raise MissingFactor("the check needs a plane curve with its equation")
    cond = gamma.conductor
    lines = []
    ok = True
    cur = c
    for _ in range(4):
        lines, ok, short = [], True, False
        for i, b in enumerate(cur.branches):
            vx, vy = b.values()
            if vx is None:
                raise NotTransversal("x vanishes on a branch")
            for name, series, v in (
                ("f_Y", cur.f_series(i, dy=1), vx),
                ("f_X", cur.f_series(i, dx=1), vy),
            ):
                o = series.ord()
                expect = ABOVE_TRUNC if v is None else cond[i] + v - 1
                if o is ABOVE_TRUNC and expect is not ABOVE_TRUNC and series.trunc < expect:
                    short = True
                    continue
                if (o is ABOVE_TRUNC) != (expect is ABOVE_TRUNC) or (
                    o is not ABOVE_TRUNC and o != expect
                ):
                    ok = False
                    lines.append(f"branch {i}: ord {name} = {o}, expected {expect}")
                else:
                    lines.append(f"branch {i}: ord {name} = {o}")
        if not short:
            break
        cur = cur.with_trunc(tuple(2 * t + 16 for t in cur.trunc_policy))
    else:
        return CheckResult("piene", False, "truncation too small to decide")
    return CheckResult("piene", ok, "; ".join(lines))


def pol_identity_check(jac, lam, gamma):
    """``v(J) = Lambda + c - e`` as sets (compared below both conductors)."""
    shift = tuple(ci - 1 for ci in gamma.conductor)
    shifted = lam.shifted(shift)
    if jac == shifted:
        return CheckResult(
            "pol_identity", True, f"v(J) = Lambda + c - e, conductor {jac.conductor}"
        )
    return CheckResult(
        "pol_identity",
        False,
        f"v(J) conductor {jac.conductor}, shifted Lambda conductor {shifted.conductor}",
    )
