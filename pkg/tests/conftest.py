import pytest
from hypothesis import HealthCheck, settings

from tjurina.construct import curve_from_branches, curve_from_polynomial
from tjurina.invariants import analysis
from tjurina.parser import parse_factors, parse_series
from tjurina.series import MPoly

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

X = MPoly.var(0, 2)
Y = MPoly.var(1, 2)
F1 = Y**3 - X**7
F2 = Y**3 - 3 * X**5 * Y - X**7 - X**8
F3 = Y**4 - 2 * X**5 * Y**2 - 4 * X**7 * Y - X**9 + X**10
THREE = "(y^3-x^7)*(y^3-3*x^5*y-x^7-x^8)*(y^4-2*x^5*y^2-4*x^7*y-x^9+x^10)"


def poly_curve(src, trunc=40):
    f, factors = parse_factors(src)
    return curve_from_polynomial(f, factors, trunc)


def param_curve(*branches):
    return curve_from_branches([[parse_series(s) for s in b] for b in branches])


@pytest.fixture(scope="session")
def three():
    return poly_curve(THREE)


@pytest.fixture(scope="session")
def three_analysis(three):
    return analysis(three)


@pytest.fixture(scope="session")
def cusp():
    return poly_curve("y^2 - x^3")


@pytest.fixture(scope="session")
def node():
    return poly_curve("x*y")


@pytest.fixture(scope="session")
def tacnode():
    return poly_curve("y^2 - x^4")


# Maximal points of Lambda for the three-branch curve THREE (1-based pairs in the names)
M12 = [(3, 3), (6, 6), (7, 7), (9, 9), (10, 10), (12, 12), (13, 13), (15, 15), (16, 16), (19, 19)]
M13 = [(3, 4), (6, 8), (7, 9), (9, 12), (10, 14), (12, 16), (13, 19), (14, 18),
       (15, 20), (17, 23), (18, 24), (21, 28)]
M23 = [(3, 4), (6, 8), (7, 9), (9, 12), (10, 14), (11, 13), (12, 16), (13, 19),
       (14, 18), (15, 20), (17, 23), (18, 24), (21, 28)]
RM123 = [(14, 14, 17), (17, 17, 21), (18, 18, 22), (20, 20, 25), (21, 21, 26),
         (22, 22, 27), (23, 23, 29), (24, 24, 30), (25, 25, 32), (26, 26, 33),
         (27, 27, 34), (29, 29, 37), (30, 30, 38), (33, 33, 42)]
AM123 = [(3, 3, 4), (6, 6, 8), (7, 7, 9), (9, 9, 12), (10, 10, 14),
         (12, 12, 16), (13, 13, 19), (14, 14, 18), (15, 15, 20),
         (17, 17, 23), (18, 18, 24), (21, 21, 28)]
