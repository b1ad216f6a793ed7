import json

import pytest

from tjurina.errors import MissingFactor, PreconditionError, WrongBranchCount
from tjurina.invariants import (
    InvariantReport,
    additive_check,
    branch_invariants,
    compute,
    delta_plane,
    delta_via_recursion,
    tjurina_main,
    tjurina_plane,
    tjurina_r2,
    tjurina_r3,
)

from conftest import param_curve, poly_curve


def test_branch_invariants(three):
    _, lam1, delta1, c1, r1, tau1 = branch_invariants(three, 0)
    assert (delta1, c1, r1, tau1) == (6, 12, 0, 12)
    assert branch_invariants(three, 1)[5] == 11
    g3, lam3, delta3, c3, r3, tau3 = branch_invariants(three, 2)
    assert (delta3, c3, r3, tau3) == (12, 24, 3, 21)
    # Lambda_3 minus Gamma_3
    assert [z for z in range(4, 24) if (z,) in lam3 and (z,) not in g3] == [14, 19, 23]


def test_smooth_branch():
    c = param_curve(("t", "t^2"))
    assert branch_invariants(c, 0)[2:] == (0, 0, 0, 0)
    assert tjurina_main(c) == 0 and delta_via_recursion(c) == 0


def test_delta(three, node, tacnode):
    assert delta_plane(three) == delta_via_recursion(three) == 100
    assert delta_plane(node) == delta_via_recursion(node) == 1
    assert delta_plane(tacnode) == delta_via_recursion(tacnode) == 2


def test_formulas_on_three(three):
    assert tjurina_main(three) == tjurina_plane(three) == tjurina_r3(three) == 157
    with pytest.raises(WrongBranchCount):
        tjurina_r2(three)


@pytest.mark.parametrize(
    "src, tau",
    [("y^2 - x^3", 2), ("x*y", 1), ("y^2 - x^4", 3), ("(y - x^2)*(y + x^2)", 3),
     ("y^3 - x^4", 6), ("x*y*(x + y)", 4)],
)
def test_formulas_on_small_curves(src, tau):
    c = poly_curve(src)
    assert tjurina_main(c) == tau
    assert tjurina_plane(c) == tau
    if c.r == 2:
        assert tjurina_r2(c) == tau
    if c.r == 3:
        assert tjurina_r3(c) == tau


def test_additive_formula(three, tacnode):
    assert additive_check(three, (0, 1), (2,)) == (157, 157)
    assert additive_check(three, (0,), (1, 2)) == (157, 157)
    assert additive_check(tacnode, (0,), (1,)) == (3, 3)
    with pytest.raises(PreconditionError):
        additive_check(three, (0, 1, 2), ())
    with pytest.raises(PreconditionError):
        additive_check(three, (0,), (1,))


def test_plane_formula_needs_factors():
    c = param_curve(("t^3", "t^4", "t^5"))
    with pytest.raises(MissingFactor):
        tjurina_plane(c)
    assert tjurina_main(c) == delta_via_recursion(c) + branch_invariants(c, 0)[2] - branch_invariants(c, 0)[4]


def test_report_fields(three):
    rep = compute(three)
    assert rep.tau == 157 and rep.delta == 100
    assert [b.tau for b in rep.branches] == [12, 11, 21]
    assert rep.intersection_sums == [49, 49, 54]
    assert rep.theta == [0, 10, 27]
    assert {k: len(v["M"]) for k, v in rep.maximals.items() if k.count(",") == 1} == {
        "0,1": 10, "0,2": 12, "1,2": 13}
    assert all(ch.passed for ch in rep.checks)
    assert not rep.ci_conditional


def test_report_round_trip(tacnode):
    rep = compute(tacnode, verify=True)
    d = rep.to_dict()
    assert all(isinstance(v, str) for v in d["theta"])
    again = InvariantReport.from_dict(json.loads(json.dumps(d)))
    assert again == rep
    assert again.to_dict() == d


def test_unavailable_checks_are_listed_as_skipped():
    rep = compute(param_curve(("t^3", "t^4", "t^5")), verify=True)
    assert {name for name, _ in rep.skipped} == {"piene", "pol_identity", "torsion_df", "cramer"}
    assert rep.ci_conditional
    rep = compute(param_curve(("t^2", "t^3")), verify=True)
    assert [name for name, _ in rep.skipped] == ["oracle"]
    assert InvariantReport.from_dict(rep.to_dict()).skipped == rep.skipped
