import math
from fractions import Fraction

import pytest

from hardmap.phase import (G2_MINUS, G2_PLUS, U_MINUS, U_PLUS, Z_MINUS, Z_PLUS, critical_line,
                           g2_of_u, growth_exponent, growth_fit, richardson_at_zero, solve_u,
                           tricritical_points, z_of_u)


def test_parametric_endpoints_exact():
    assert z_of_u(U_MINUS) == Fraction(-512, 3125) == Z_MINUS
    assert g2_of_u(U_MINUS) == Fraction(234375, 1048576) == G2_MINUS
    assert z_of_u(U_PLUS) == 32 == Z_PLUS
    assert g2_of_u(U_PLUS) == Fraction(15, 4096) == G2_PLUS


def test_tricritical_points():
    minus, plus = tricritical_points()
    assert (minus.z, minus.g_c_squared) == (Fraction(-2 ** 9, 5 ** 5), Fraction(5 ** 6 * 15, 2 ** 20))
    assert (plus.z, plus.g_c_squared) == (Fraction(32), Fraction(15, 4096))
    assert math.isclose(plus.g_c, math.sqrt(15) / 64, rel_tol=1e-15)
    assert math.isclose(plus.g_c, 0.0605154, rel_tol=1e-6)
    assert math.isclose(minus.g_c, 5 ** 3 * math.sqrt(15) / 2 ** 10, rel_tol=1e-15)
    assert float(minus.z) == -0.16384


def test_continuity_at_z_plus():
    high = critical_line(Fraction(32))
    assert high.branch == "high-z"
    assert high.g_c_squared == Fraction(15, 4096)
    below = critical_line(32 - 1e-9)
    assert below.branch == "parametric"
    assert abs(below.g_c_squared - 15 / 4096) < 1e-12


def test_z_minus_endpoint():
    pt = critical_line(Z_MINUS)
    assert pt.u == U_MINUS and pt.g_c_squared == G2_MINUS
    assert abs(critical_line(float(Z_MINUS) + 1e-15).g_c_squared - float(G2_MINUS)) < 1e-9
    with pytest.raises(ValueError):
        critical_line(Fraction(-1, 5))


def test_small_z_limit():
    assert abs(critical_line(1e-12).g_c_squared - 0.125) < 1e-10
    assert abs(critical_line(Fraction(0)).g_c_squared - 0.125) < 1e-15


@pytest.mark.parametrize("z", [-0.15, -0.01, 0.3, 1.0, 7.5, 31.9])
def test_bisection_inverts(z):
    u = solve_u(z)
    assert abs(z_of_u(u) - z) <= 1e-13 * max(1.0, abs(z))


def test_high_z_branch_formula():
    z = Fraction(100)
    assert critical_line(z).g_c_squared == Fraction(1, 800) - Fraction(1, 40000)


def test_richardson_exact_on_polynomials():
    xs = [1 / 8, 1 / 16, 1 / 32]
    ys = [2.5 + 3 * x - 7 * x * x for x in xs]
    assert abs(richardson_at_zero(xs, ys)[-1] - 2.5) < 1e-12


def test_growth_exponents():
    assert abs(growth_exponent(0, 8, 400) - 2.5) < 0.05
    assert abs(growth_exponent(1, 8, 400) - 2.5) < 0.1
    assert abs(growth_exponent(32, 8, 400) - Fraction(7, 3)) < 0.15


def test_growth_fit_raw_slopes_approach_from_below():
    fit = growth_fit(0, 8, 400)
    slopes = [s for _, s in fit.rows]
    assert slopes == sorted(slopes)
    assert all(s < 2.5 for s in slopes)
    with pytest.raises(ValueError):
        growth_fit(0, 100, 150)
