import numpy as np
import pytest

from tjurina.combinatorics import fiber, fiber_nonempty_grid, maximals, quotient_length, theta
from tjurina.errors import GammaTooSmall
from tjurina.value_sets import ValueSet, gamma_set, lambda_set, project

from conftest import AM123, M12, M13, M23, RM123, param_curve


def full(r, box):
    """N^r on the window [0, box]."""
    return ValueSet(np.ones((box + 2,) * r, dtype=bool), (0,) * r, (box,) * r)


def test_fiber_all_coordinates_pinned(node):
    g = gamma_set(node)
    assert fiber(g, (1, 1), {0, 1}) == {(1, 1)}
    assert fiber(g, (0, 1), {0, 1}) == set()


def test_node_fibers(node):
    g = gamma_set(node)
    assert fiber(g, (0, 0), {0}) == set()
    f = fiber(g, (1, 1), {0})
    assert f and all(p[0] == 1 and p[1] > 1 for p in f)
    grid = fiber_nonempty_grid(g, frozenset({0}))
    assert grid[g._index((1, 1))] and not grid[g._index((0, 0))]


def test_node_has_no_maximals(node):
    rep = maximals(lambda_set(node))
    assert rep.M == frozenset() and rep.RM == frozenset() and rep.AM == frozenset()


def test_tangent_pair(tacnode):
    rep = maximals(lambda_set(tacnode))
    assert rep.sorted("M") == [(1, 1)]


def test_one_branch_is_trivial(cusp):
    assert maximals(lambda_set(cusp)).M == frozenset()


def test_maximal_points_of_projections(three_analysis):
    lam = three_analysis.lam
    assert maximals(project(lam, (0, 1))).sorted("M") == M12
    assert maximals(project(lam, (0, 2))).sorted("M") == M13
    assert maximals(project(lam, (1, 2))).sorted("M") == M23


def test_relative_and_absolute_maximals(three_analysis):
    rep = maximals(three_analysis.lam)
    assert rep.sorted("RM") == RM123
    assert rep.sorted("AM") == AM123
    assert rep.RM | rep.AM <= rep.M


def test_theta(three_analysis):
    lam = three_analysis.lam
    assert theta(lam, 0) == 0
    assert theta(lam, 1) == 10
    assert theta(lam, 2) == 27
    with pytest.raises(IndexError):
        theta(lam, 3)


def test_theta_matches_listed_sets():
    # distinct last coordinates of the listed relative maximals
    assert len({p[1] for p in M12}) == 10
    assert len({p[1] for p in M13} | {p[1] for p in M23} | {p[2] for p in RM123}) == 27


def test_quotient_length_small_cases():
    g = gamma_set(param_curve(("t^2", "t^3")))
    assert quotient_length(g, (4,)) == 3
    assert quotient_length(full(2, 6), (3, 5)) == 8
    assert quotient_length(full(3, 6), (1, 2, 3)) == 6


def test_quotient_length_gives_delta(three_analysis):
    g = three_analysis.gamma
    for gamma in (g.conductor, tuple(c + 3 for c in g.conductor)):
        assert sum(gamma) - quotient_length(g, gamma) == 100
    with pytest.raises(GammaTooSmall):
        quotient_length(g, (1, 1, 1))
