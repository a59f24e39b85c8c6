from fractions import Fraction
from math import comb

import pytest

from hardmap.series import GSeries, ZPoly
from hardmap.solver import (binomial, closed_formula, closed_formula_at, conjugation_checks,
                            eqforP_residual, free_energy, free_energy_log_check, g_bmhp,
                            g_qtising, hp_residuals, ising_residuals, marking_operator,
                            solve_hp_system, solve_ising_system)

TABLE = {
    2: [1, 1],
    4: [3, 9, 3],
    6: [12, 60, 66, 12],
    8: [56, 392, 780, 460, 56],
    10: [288, 2592, 7584, 8400, 3168, 288],
}


def test_hp_leading_orders():
    sol = solve_hp_system(6)
    assert sol.R[0].is_zero()
    assert sol.S[0] == ZPoly([1]) and sol.V[0] == ZPoly([1])
    assert sol.T[0].is_zero() and sol.T[1].is_zero() and sol.T[2].is_zero()
    assert sol.R[1] == ZPoly([1, 1])


def test_hp_system_at_zero_fugacity():
    S0 = solve_hp_system(8).S.subs_z(0)
    assert [S0[k] for k in (0, 2, 4, 6, 8)] == [1, 2, 8, 40, 224]


def test_hp_residuals_vanish_and_branch():
    sol = solve_hp_system(10)
    res = hp_residuals(sol)
    assert all(r.is_zero() for r in res.values()), {k: v for k, v in res.items() if not v.is_zero()}
    assert sol.iterations <= 10 + 2


def test_g_bmhp_table_and_parity():
    G = g_bmhp(10)
    for k, coeffs in TABLE.items():
        assert G[k].int_coeffs() == coeffs
    assert all(G[k].is_zero() for k in range(1, 11, 2))
    assert G[0].is_zero()
    assert [G[k](0) for k in TABLE] == [1, 3, 12, 56, 288]
    assert G.is_integral()
    with pytest.raises(ValueError):
        g_bmhp(1)


def test_closed_formula_examples():
    assert closed_formula(1) == ZPoly([1, 1])
    assert closed_formula(5).int_coeffs() == TABLE[10]
    assert Fraction(3, 2) * 16 / 30 * comb(8, 4) == 56 == closed_formula(4)[0]
    with pytest.raises(ValueError):
        closed_formula(0)


def test_binomial_convention():
    assert binomial(0, 0) == 1
    assert binomial(-1, 0) == 0
    assert binomial(3, 4) == 0
    assert binomial(3, -1) == 0


def test_closed_formula_matches_series():
    G = g_bmhp(30)
    for n in range(1, 16):
        assert closed_formula(n) == G[2 * n], n


@pytest.mark.parametrize("z", [Fraction(0), Fraction(1), Fraction(-1, 7), Fraction(32), Fraction(5, 3)])
def test_closed_formula_at_agrees_with_polynomial(z):
    for n in (1, 2, 7, 12):
        assert closed_formula_at(n, z) == closed_formula(n)(z)


def test_free_energy_first_term_and_round_trip():
    G = g_bmhp(10)
    F = free_energy(G)
    assert F[2] == ZPoly.from_coeffs([Fraction(1, 3), Fraction(2, 3)])
    assert marking_operator(F) == G
    with pytest.raises(ValueError):
        free_energy(GSeries.from_terms(2, {(2, 2): 1}))


def test_free_energy_log_identity():
    lhs, rhs = free_energy_log_check(10)
    assert lhs == rhs


def test_conjugation_relations():
    sol = solve_hp_system(2)
    assert sol.S[2] == ZPoly([2, 2])
    assert conjugation_checks(10)


def test_ising_leading_terms():
    sol = solve_ising_system(8)
    assert sol.V[0] == ZPoly([1]) and sol.U[0].is_zero()
    assert sol.C[2] == ZPoly([0, -1])
    g2z = GSeries.monomial(8, 2, 1)
    assert sol.B - sol.V == -3 * g2z * sol.V * sol.V * sol.U
    assert all(r.is_zero() for r in ising_residuals(sol).values())


def test_g_qtising_low_orders():
    G = g_qtising(6)
    assert G[0].is_zero()
    # first terms by hand iteration of the seven relations
    assert G[1].is_zero()
    assert G[2] == ZPoly([0, 1])
    assert G[3] == ZPoly([0, 2])
    assert G[4] == ZPoly([0, 6])


def test_eqforP_residual():
    assert eqforP_residual(0).is_zero()
    assert eqforP_residual(10).is_zero()
    sol = solve_ising_system(8)
    V0 = GSeries(sol.V.subs_z(0), 8)
    g = GSeries.monomial(8, 1)
    assert V0 == 1 + 3 * g * g * V0 ** 3
