"""Per-branch and global invariants and the formulas for the Tjurina number.

Expensive value sets are computed once per curve and cached in a
:class:`CurveAnalysis`; the module-level functions accept a curve and use
the shared analysis behind the scenes.
"""

import itertools
import weakref
from dataclasses import dataclass, field

from .combinatorics import maximals, quotient_length, theta
from .curve import intersection_multiplicity
from .errors import MissingFactor, PreconditionError, VerificationFailed, WrongBranchCount
from .value_sets import gamma_set, gaps, jacobian_value_set, lambda_set, project

__all__ = [
    "BranchInvariants",
    "CurveAnalysis",
    "InvariantReport",
    "additive_check",
    "analysis",
    "branch_invariants",
    "compute",
    "delta_plane",
    "delta_via_recursion",
    "tjurina_main",
    "tjurina_plane",
    "tjurina_r2",
    "tjurina_r3",
]


@dataclass(frozen=True)
class BranchInvariants:
    label: str
    multiplicity: int
    gamma: tuple  # members below the conductor
    gamma_conductor: int
    lam: tuple
    lam_conductor: int
    delta: int
    conductor: int
    r: int
    tau: int

    def as_tuple(self):
        return (self.gamma, self.lam, self.delta, self.conductor, self.r, self.tau)


class CurveAnalysis:
    """Lazily computed value sets of one curve, shared by all formulas."""

    def __init__(self, curve, slack=0):
        self.curve = curve
        self.slack = slack
        self._gamma = None
        self._lam = None
        self._jac = None
        self._branch = {}
        self._sub = {}
        self._maximals = {}

    @property
    def gamma(self):
        if self._gamma is None:
            self._gamma = gamma_set(self.curve, slack=self.slack)
        return self._gamma

    @property
    def lam(self):
        if self._lam is None:
            self._lam = lambda_set(self.curve, gamma=self.gamma, slack=self.slack)
        return self._lam

    @property
    def jac(self):
        if self._jac is None:
            self._jac = jacobian_value_set(
                self.curve, gamma=self.gamma, lam=self.lam, slack=self.slack
            )
        return self._jac

    def sub(self, indices):
        """Analysis of the sub-curve on ``indices`` (order preserved)."""
        indices = tuple(indices)
        if indices == tuple(range(self.curve.r)):
            return self
        if indices not in self._sub:
            self._sub[indices] = CurveAnalysis(self.curve.sub_curve(indices), self.slack)
        return self._sub[indices]

    def lam_maximals(self, J):
        J = tuple(J)
        if J not in self._maximals:
            e = self.lam if J == tuple(range(self.curve.r)) else project(self.lam, J)
            self._maximals[J] = maximals(e)
        return self._maximals[J]

    def branch(self, i):
        if i not in self._branch:
            one = self.sub((i,))
            g, l = one.gamma, one.lam
            delta = len(gaps(g))
            cond = g.conductor[0]
            extra = [z for z in l.as_list() + list(range(l.conductor[0], cond)) if (z,) not in g]
            r = len(set(extra))
            b = self.curve.branches[i]
            self._branch[i] = BranchInvariants(
                label=b.label,
                multiplicity=self.curve.multiplicities()[i],
                gamma=tuple(g.as_list()),
                gamma_conductor=cond,
                lam=tuple(l.as_list()),
                lam_conductor=l.conductor[0],
                delta=delta,
                conductor=cond,
                r=r,
                tau=cond - r,
            )
        return self._branch[i]

    def intersections(self):
        c = self.curve
        return {
            (j, k): intersection_multiplicity(c, j, k)
            for j in range(c.r)
            for k in range(j + 1, c.r)
        }

    def intersection_sums(self):
        inter = self.intersections()
        r = self.curve.r
        return [sum(v for (j, k), v in inter.items() if i in (j, k)) for i in range(r)]

    def thetas(self):
        return [theta(self.lam, i) for i in range(self.curve.r)]


_ANALYSES = weakref.WeakKeyDictionary()


def analysis(c, slack=0):
    """Shared :class:`CurveAnalysis` for ``c``."""
    a = _ANALYSES.get(c)
    if a is None or a.slack != slack:
        a = CurveAnalysis(c, slack)
        _ANALYSES[c] = a
    return a


def _require_plane(c):
    if c.n != 2 or c.branch_factors is None:
        raise MissingFactor("this formula needs a plane curve with implicit factors")


def branch_invariants(c, i):
    """``(Gamma_i, Lambda_i, delta_i, c_i, r_i, tau_i)`` of the isolated branch ``i``."""
    a = analysis(c)
    b = a.branch(i)
    one = a.sub((i,))
    return one.gamma, one.lam, b.delta, b.conductor, b.r, b.tau


def delta_via_recursion(c):
    """``sum(gamma) - length(O / O(gamma))`` at ``gamma = c(Gamma)``, rechecked one step up."""
    g = analysis(c).gamma
    cond = g.conductor
    d0 = sum(cond) - quotient_length(g, cond)
    up = tuple(x + 1 for x in cond)
    d1 = sum(up) - quotient_length(g, up)
    if d0 != d1:
        raise VerificationFailed(f"delta depends on gamma: {d0} vs {d1}")
    return d0


def delta_plane(c):
    """``sum(delta_i) + (1/2) sum(I_i)`` for plane curves."""
    _require_plane(c)
    a = analysis(c)
    total_i = sum(a.intersection_sums())
    if total_i % 2:
        raise VerificationFailed("sum of intersection multiplicities is odd")
    return sum(a.branch(i).delta for i in range(c.r)) + total_i // 2


def _delta(c):
    if c.n == 2 and c.branch_factors is not None:
        return delta_plane(c)
    return delta_via_recursion(c)


def tjurina_main(c):
    """``delta + sum(delta_i - r_i + Theta_i)``."""
    a = analysis(c)
    th = a.thetas()
    return _delta(c) + sum(a.branch(i).delta - a.branch(i).r + th[i] for i in range(c.r))


def tjurina_plane(c):
    """``sum(tau_i + I_i / 2 + Theta_i)`` for plane curves."""
    _require_plane(c)
    a = analysis(c)
    th = a.thetas()
    sums = a.intersection_sums()
    return sum(a.branch(i).tau + th[i] for i in range(c.r)) + sum(sums) // 2


def tjurina_r2(c):
    if c.r != 2:
        raise WrongBranchCount(f"the two-branch formula needs r = 2, got {c.r}")
    a = analysis(c)
    b1, b2 = a.branch(0), a.branch(1)
    return _delta(c) + b1.delta + b2.delta - (b1.r + b2.r) + len(a.lam_maximals((0, 1)).M)


def tjurina_r3(c):
    if c.r != 3:
        raise WrongBranchCount(f"the three-branch formula needs r = 3, got {c.r}")
    a = analysis(c)
    bs = [a.branch(i) for i in range(3)]
    pairs = sum(len(a.lam_maximals(J).M) for J in itertools.combinations(range(3), 2))
    full = a.lam_maximals((0, 1, 2))
    return (
        _delta(c)
        + sum(b.delta for b in bs)
        - sum(b.r for b in bs)
        + pairs
        + len(full.RM)
        - len(full.AM)
    )


def additive_check(c, J, K):
    """Both sides of the additive formula for the partition ``J | K``."""
    _require_plane(c)
    J, K = tuple(J), tuple(K)
    if not J or not K:
        raise PreconditionError("J and K must both be nonempty")
    if sorted(J + K) != list(range(c.r)):
        raise PreconditionError("J and K must partition the branches")
    a = analysis(c)
    lhs = tjurina_plane(c)
    cj, ck = a.sub(J).curve, a.sub(K).curve
    inter = sum(intersection_multiplicity(c, j, k) for j in J for k in K)
    theta_all = sum(a.thetas())
    theta_j = sum(a.sub(J).thetas())
    theta_k = sum(a.sub(K).thetas())
    _ANALYSES[cj] = a.sub(J)
    _ANALYSES[ck] = a.sub(K)
    rhs = tjurina_plane(cj) + tjurina_plane(ck) + inter + theta_all - theta_j - theta_k
    return lhs, rhs


def _str_int(v):
    return None if v is None else str(int(v))


@dataclass
class InvariantReport:
    labels: list
    order: list
    n: int
    coordinate_change: int
    ci_conditional: bool
    branches: list
    intersections: dict  # "(j,k)" -> int
    intersection_sums: list
    gamma_conductor: list
    lambda_inf: list
    lambda_conductor: list
    theta: list
    delta: int
    delta_recursion: int
    delta_plane: object
    tau: int
    tau_plane: object
    tau_r2: object
    tau_r3: object
    tau_direct: object
    maximals: dict  # "0,1" -> {"M": [...], "RM": [...], "AM": [...]}
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # [name, reason] for checks that could not run

    @property
    def r(self):
        return len(self.labels)

    def formula_values(self):
        out = {"main": self.tau}
        for k in ("plane", "r2", "r3", "direct"):
            v = getattr(self, f"tau_{k}")
            if v is not None:
                out[k] = v
        return out

    def to_dict(self):
        def pts(ps):
            return [[str(x) for x in p] for p in ps]

        return {
            "r": str(self.r),
            "n": str(self.n),
            "labels": list(self.labels),
            "order": [str(i) for i in self.order],
            "coordinate_change": str(self.coordinate_change),
            "ci_conditional": self.ci_conditional,
            "branches": [
                {
                    "label": b.label,
                    "multiplicity": str(b.multiplicity),
                    "gamma": [str(v) for v in b.gamma],
                    "gamma_conductor": str(b.gamma_conductor),
                    "lambda": [str(v) for v in b.lam],
                    "lambda_conductor": str(b.lam_conductor),
                    "delta": str(b.delta),
                    "conductor": str(b.conductor),
                    "r": str(b.r),
                    "tau": str(b.tau),
                }
                for b in self.branches
            ],
            "intersections": {k: str(v) for k, v in self.intersections.items()},
            "intersection_sums": [str(v) for v in self.intersection_sums],
            "gamma_conductor": [str(v) for v in self.gamma_conductor],
            "lambda_inf": [str(v) for v in self.lambda_inf],
            "lambda_conductor": [str(v) for v in self.lambda_conductor],
            "theta": [str(v) for v in self.theta],
            "delta": str(self.delta),
            "delta_recursion": str(self.delta_recursion),
            "delta_plane": _str_int(self.delta_plane),
            "tau": str(self.tau),
            "tau_plane": _str_int(self.tau_plane),
            "tau_r2": _str_int(self.tau_r2),
            "tau_r3": _str_int(self.tau_r3),
            "tau_direct": _str_int(self.tau_direct),
            "maximals": {
                k: {name: pts(v[name]) for name in ("M", "RM", "AM")}
                for k, v in self.maximals.items()
            },
            "checks": [ch.to_dict() for ch in self.checks],
            "skipped": [list(item) for item in self.skipped],
        }

    @classmethod
    def from_dict(cls, d):
        from .verification import CheckResult

        def opt(v):
            return None if v is None else int(v)

        def pts(ps):
            return [tuple(int(x) for x in p) for p in ps]

        branches = [
            BranchInvariants(
                label=b["label"],
                multiplicity=int(b["multiplicity"]),
                gamma=tuple(int(v) for v in b["gamma"]),
                gamma_conductor=int(b["gamma_conductor"]),
                lam=tuple(int(v) for v in b["lambda"]),
                lam_conductor=int(b["lambda_conductor"]),
                delta=int(b["delta"]),
                conductor=int(b["conductor"]),
                r=int(b["r"]),
                tau=int(b["tau"]),
            )
            for b in d["branches"]
        ]
        return cls(
            labels=list(d["labels"]),
            order=[int(i) for i in d["order"]],
            n=int(d["n"]),
            coordinate_change=int(d["coordinate_change"]),
            ci_conditional=bool(d["ci_conditional"]),
            branches=branches,
            intersections={k: int(v) for k, v in d["intersections"].items()},
            intersection_sums=[int(v) for v in d["intersection_sums"]],
            gamma_conductor=[int(v) for v in d["gamma_conductor"]],
            lambda_inf=[int(v) for v in d["lambda_inf"]],
            lambda_conductor=[int(v) for v in d["lambda_conductor"]],
            theta=[int(v) for v in d["theta"]],
            delta=int(d["delta"]),
            delta_recursion=int(d["delta_recursion"]),
            delta_plane=opt(d["delta_plane"]),
            tau=int(d["tau"]),
            tau_plane=opt(d["tau_plane"]),
            tau_r2=opt(d["tau_r2"]),
            tau_r3=opt(d["tau_r3"]),
            tau_direct=opt(d["tau_direct"]),
            maximals={
                k: {name: pts(v[name]) for name in ("M", "RM", "AM")}
                for k, v in d["maximals"].items()
            },
            checks=[CheckResult.from_dict(ch) for ch in d["checks"]],
            skipped=[list(item) for item in d.get("skipped", [])],
        )


def _subset_key(J):
    return ",".join(str(j) for j in J)


def compute(c, verify=False, slack=0, order=None):
    """Full :class:`InvariantReport`; ``verify`` adds every cross-check."""
    from . import verification as ver

    a = analysis(c, slack)
    plane = c.n == 2 and c.branch_factors is not None
    branches = [a.branch(i) for i in range(c.r)]
    inter = a.intersections() if plane else {}
    sums = a.intersection_sums() if plane else []
    th = a.thetas()
    d_rec = delta_via_recursion(c)
    d_plane = delta_plane(c) if plane else None
    tau = tjurina_main(c)
    t_plane = tjurina_plane(c) if plane else None
    t_r2 = tjurina_r2(c) if c.r == 2 else None
    t_r3 = tjurina_r3(c) if c.r == 3 else None
    maxi = {}
    for k in range(2, c.r + 1):
        for J in itertools.combinations(range(c.r), k):
            rep = a.lam_maximals(J)
            maxi[_subset_key(J)] = {n: rep.sorted(n) for n in ("M", "RM", "AM")}
    checks = []
    skipped = []
    tau_direct = None
    if d_plane is not None:
        checks.append(ver.CheckResult(
            "delta_agreement", d_plane == d_rec,
            f"delta from intersections {d_plane}, from the length recursion {d_rec}",
        ))
    values = {"main": tau, "plane": t_plane, "r2": t_r2, "r3": t_r3}
    present = {k: v for k, v in values.items() if v is not None}
    checks.append(ver.CheckResult(
        "formula_agreement", len(set(present.values())) == 1,
        ", ".join(f"{k}={v}" for k, v in present.items()),
    ))
    if verify:
        if plane:
            checks.append(ver.piene_check(c, a.gamma))
            checks.append(ver.pol_identity_check(a.jac, a.lam, a.gamma))
            if c.poly is not None:
                tau_direct = ver.tjurina_direct(c.poly)
                checks.append(ver.CheckResult(
                    "oracle", tau_direct == tau,
                    f"colength of (f, f_X, f_Y) = {tau_direct}, formula = {tau}",
                ))
            if c.r >= 2:
                lhs, rhs = additive_check(c, tuple(range(c.r - 1)), (c.r - 1,))
                checks.append(ver.CheckResult(
                    "additive", lhs == rhs, f"lhs {lhs}, rhs {rhs}"))
        if plane and c.poly is None:
            skipped.append(["oracle", "no exact defining polynomial (parametric input)"])
        if not plane and c.equations is None:
            for name in ("piene", "pol_identity", "torsion_df", "cramer"):
                skipped.append([name, "no defining equations supplied"])
        elif not plane:
            skipped.append(["piene", "plane curves only"])
            skipped.append(["pol_identity", "plane curves only"])
        if c.equations is not None and len(c.equations) == c.n - 1:
            eqs = list(c.equations)
            df_ok = all(ver.torsion_test(c, [e.diff(l) for l in range(c.n)], eqs) for e in eqs)
            checks.append(ver.CheckResult(
                "torsion_df", df_ok, "every d(f_j) is torsion" if df_ok else "some d(f_j) is not torsion"))
            from .series import MPoly

            checks.append(ver.cramer_check(c, eqs, MPoly.var(0, c.n)))
    return InvariantReport(
        labels=[b.label for b in c.branches],
        order=list(order) if order is not None else list(range(c.r)),
        n=c.n,
        coordinate_change=c.coordinate_change,
        ci_conditional=c.n > 2,
        branches=branches,
        intersections={_subset_key(k): v for k, v in inter.items()},
        intersection_sums=sums,
        gamma_conductor=list(a.gamma.conductor),
        lambda_inf=list(a.lam.inf),
        lambda_conductor=list(a.lam.conductor),
        theta=th,
        delta=d_plane if d_plane is not None else d_rec,
        delta_recursion=d_rec,
        delta_plane=d_plane,
        tau=tau,
        tau_plane=t_plane,
        tau_r2=t_r2,
        tau_r3=t_r3,
        tau_direct=tau_direct,
        maximals=maxi,
        checks=checks,
        skipped=skipped,
    )
