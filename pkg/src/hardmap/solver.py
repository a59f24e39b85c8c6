"""Order-by-order solutions of the algebraic systems for bicubic maps with hard
particles and for quasi-tetravalent Ising maps, plus the closed coefficient
formula and the free-energy relations derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .series import GSeries, ZPoly, ONE


class ConvergenceError(RuntimeError):
    """The fixed-point iteration did not stabilise within its budget."""


def _g(order: int) -> GSeries:
    return GSeries.monomial(order, 1)


@dataclass(frozen=True)
class HPSystemSolution:
    R: GSeries
    S: GSeries
    T: GSeries
    V: GSeries
    iterations: int = 0

    @property
    def order(self) -> int:
        return self.R.order


@dataclass(frozen=True)
class IsingSystemSolution:
    A: GSeries
    B: GSeries
    C: GSeries
    R: GSeries
    S: GSeries
    U: GSeries
    V: GSeries
    iterations: int = 0

    @property
    def order(self) -> int:
        return self.R.order


def _hp_sweep(R: GSeries, S: GSeries, T: GSeries, V: GSeries, order: int):
    zt = lambda s, k: s.mul_z(k)  # noqa: E731
    R = (V * V).shift(1) + zt(S * S, 1).shift(1) + zt(T, 1).shift(2) * 2
    S = 1 + R.shift(1) * 2
    V = S + zt(V * S, 1).shift(2) * 2
    V2 = V * V
    T = -zt(V2 * V2, 1).shift(3)
    return R, S, T, V


def solve_hp_system(order: int) -> HPSystemSolution:
    """Solve ``S = 1 + 2gR``, ``T = -g^3 z V^4``, ``R = gV^2 + gzS^2 + 2g^2 zT``,
    ``V = S + 2g^2 zVS`` to ``O(g^{order+1})``.

    Gauss-Seidel sweeps seeded with ``R = T = 0``, ``S = V = 1``.  Sweep ``k``
    fixes the ``g^k`` coefficients, so the working truncation grows with the
    sweep count; a final full-order sweep confirms the fixed point.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    R = GSeries.zero(0)
    T = GSeries.zero(0)
    S = GSeries.one(0)
    V = GSeries.one(0)
    for it in range(1, order + 3):
        work = min(it, order)
        prev = (R, S, T, V)
        R, S, T, V = _hp_sweep(*(s.extend(work) for s in prev), work)
        if work == order and it > 1 and all(a.extend(order) == b for a, b in zip(prev, (R, S, T, V))):
            return HPSystemSolution(R, S, T, V, it)
        if order == 0 and it == 1:
            return HPSystemSolution(R, S, T, V, it)
    raise ConvergenceError(f"hard-particle system unstable after {order + 2} sweeps")


def hp_residuals(sol: HPSystemSolution) -> dict[str, GSeries]:
    """All defining relations moved to one side; every entry should vanish."""
    R, S, T, V = sol.R, sol.S, sol.T, sol.V
    g = _g(sol.order)
    z = GSeries([ZPoly.monomial(1)], sol.order)
    g2z = g * g * z
    return {
        "S": S - 1 - 2 * g * R,
        "T": T + g * g * g * z * V ** 4,
        "R": R - g * V * V - g * z * S * S - 2 * g2z * T,
        "V_quartic": V - 1 - 2 * g * R - 2 * g2z * V * V + 4 * g2z * g2z * V * V * S,
        "V_linear": V - S - 2 * g2z * V * S,
        "V_factored": (1 - 2 * g2z * V) * (V - S - 2 * g2z * V * S),
    }


def g_leaf_bud(sol: HPSystemSolution) -> tuple[GSeries, GSeries]:
    R, S, T, V = sol.R, sol.S, sol.T, sol.V
    leaf = R
    bud = (R * R).shift(1) + ((V ** 4).shift(1) + 4 * S * T).mul_z(1).shift(2)
    return leaf, bud


def g_bmhp(order: int) -> GSeries:
    """Generating function of rooted bicubic maps with hard particles,
    ``g (G_leaf - G_bud)``, exact through ``g^order``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    sol = solve_hp_system(order)
    leaf, bud = g_leaf_bud(sol)
    return (leaf - bud).shift(1)


def binomial(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def closed_formula(n: int) -> ZPoly:
    """Coefficient of ``g^{2n}`` from the Lagrange-inversion triple sum."""
    if n < 1:
        raise ValueError("n must be at least 1")
    coeffs = []
    for j in range(n + 1):
        acc = Fraction(0)
        for p in range(j // 2 + 1):
            term = binomial(2 * n - j, n) * binomial(n - j, p) * binomial(4 * n - 2 * j, j - 2 * p)
            if term:
                acc += Fraction((-1) ** p, 2 ** p) * term
        coeffs.append(acc)
    prefactor = Fraction(3 * 2 ** n, 2 * (n + 1) * (n + 2))
    poly = ZPoly.from_coeffs(c * prefactor for c in coeffs)
    if not poly.is_integral() or any(c < 0 for c in poly.num):
        raise ArithmeticError(f"closed formula gave a non-count polynomial at n={n}: {poly}")
    return poly


def closed_formula_at(n: int, z: Fraction) -> Fraction:
    """``G_{2n}(z)`` for a rational ``z`` without building the polynomial.

    Binomials are updated by their ratios along ``p`` so that large ``n`` stays
    affordable.
    """
    z = Fraction(z)
    total = Fraction(0)
    zp = Fraction(1)
    for j in range(n + 1):
        inner = 0
        # term(p) = (-1)^p 2^(n-p) C(n-j,p) C(4n-2j, j-2p), kept integral by the 2^n scale
        c1 = 1  # C(n-j, p)
        c2 = binomial(4 * n - 2 * j, j)  # C(4n-2j, j-2p)
        for p in range(j // 2 + 1):
            if p > n - j:
                break
            if p:
                c1 = c1 * (n - j - p + 1) // p
                top = 4 * n - 2 * j
                k = j - 2 * p
                # C(top, k) from C(top, k+2)
                c2 = c2 * (k + 2) * (k + 1) // ((top - k - 1) * (top - k))
            term = c1 * c2 << (n - p)
            inner += -term if p & 1 else term
        total += zp * binomial(2 * n - j, n) * inner
        zp *= z
    return total * Fraction(3, 2 * (n + 1) * (n + 2))


def free_energy(G: GSeries) -> GSeries:
    """Invert ``G = (3/2)(g d/dg - z d/dz) F`` term by term."""
    terms = {}
    for (a, b), c in G.terms().items():
        if a == b:
            raise ValueError(f"coefficient g^{a} z^{b} has no empty vertex to mark")
        terms[(a, b)] = Fraction(2, 3) * c / (a - b)
    return GSeries.from_terms(G.order, terms)


def marking_operator(F: GSeries) -> GSeries:
    """``(3/2)(g d/dg - z d/dz)``: mark an unoccupied vertex and root at it."""
    return (F.g_euler() - F.z_euler()) * Fraction(3, 2)


def unrooted_lhs(F: GSeries) -> GSeries:
    """``((1/g) d/dg)^2 (g^4 F)``, which sends ``g^k`` to ``(k+4)(k+2) g^k``."""
    return GSeries([p * ((k + 4) * (k + 2)) for k, p in enumerate(F.coeffs)], F.order)


def free_energy_log_check(order: int) -> tuple[GSeries, GSeries]:
    """Both sides of ``((1/g)d/dg)^2 (g^4 F) = 4 log V``."""
    F = free_energy(g_bmhp(order))
    V = solve_hp_system(order).V
    return unrooted_lhs(F), 4 * V.log()


def conjugation_checks(order: int) -> bool:
    """``G|g^{2n} = 3/(n+2) R|g^{2n-1} = 3/(2(n+2)) S|g^{2n}`` for ``2n <= order``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    sol = solve_hp_system(order)
    G = g_bmhp(order)
    for n in range(1, order // 2 + 1):
        Gn = G[2 * n]
        if Gn != sol.R[2 * n - 1] * Fraction(3, n + 2):
            return False
        if Gn != sol.S[2 * n] * Fraction(3, 2 * (n + 2)):
            return False
    return True


def _ising_sweep(A, B, C, R, S, U, V):
    R = (V * V * U).shift(1) * 3 + B.mul_z(1).shift(1)
    S = (V * V * V).shift(1) + C.mul_z(1).shift(1)
    A = R.shift(1) * 3
    order = R.order
    U = R.shift(1) * 3 + GSeries.monomial(order, 1, 1) - A.mul_z(2).shift(2)
    RR = R * R
    B = 1 + RR.shift(1) * 3 + S.shift(1) * 3
    V2 = V * V
    C = -(V2 * V).mul_z(1).shift(2)
    V = 1 + RR.shift(1) * 3 + S.shift(1) * 3 + (V2 * U).mul_z(1).shift(2) * 3
    return A, B, C, R, S, U, V


def solve_ising_system(order: int) -> IsingSystemSolution:
    """Fixed point of the seven half-tree relations for quasi-tetravalent maps
    with Ising spins, seeded with ``B = V = 1`` and the rest zero."""
    if order < 0:
        raise ValueError("order must be non-negative")
    state = [GSeries.zero(0)] * 7
    state[1] = state[6] = GSeries.one(0)
    for it in range(1, order + 3):
        work = min(it, order)
        prev = state
        state = list(_ising_sweep(*(s.extend(work) for s in prev)))
        if work == order and (order == 0 or (it > 1 and all(
                a.extend(order) == b for a, b in zip(prev, state)))):
            return IsingSystemSolution(*state, iterations=it)
    raise ConvergenceError(f"Ising system unstable after {order + 2} sweeps")


def ising_residuals(sol: IsingSystemSolution) -> dict[str, GSeries]:
    A, B, C, R, S, U, V = sol.A, sol.B, sol.C, sol.R, sol.S, sol.U, sol.V
    order = sol.order
    g = _g(order)
    z = GSeries([ZPoly.monomial(1)], order)
    return {
        "A": A - 3 * g * R,
        "B": B - 1 - 3 * g * R * R - 3 * g * S,
        "C": C + g * g * z * V ** 3,
        "R": R - 3 * g * V * V * U - g * z * B,
        "S": S - g * V ** 3 - g * z * C,
        "U": U - 3 * g * R - g * z + g * g * z * z * A,
        "V": V - 1 - 3 * g * R * R - 3 * g * S - 3 * g * g * z * V * V * U,
    }


def g_qtising(order: int) -> GSeries:
    """``gR - g^2 (R^3 + 6RS + gzV^3)`` for quasi-tetravalent Ising maps."""
    if order < 1:
        raise ValueError("order must be at least 1")
    sol = solve_ising_system(order)
    R, S, V = sol.R, sol.S, sol.V
    return R.shift(1) - (R ** 3 + 6 * R * S + (V ** 3).mul_z(1).shift(1)).shift(2)


def eqforP_residual(order: int) -> GSeries:
    """Division-free residual ``(P - 1 - 3x^2P^3)(1 - 3xP)^2 - v^2 P`` with
    ``P = V/(1 - g^2z^2)``, ``x = g(1 - g^2z^2)^2``, ``v = gz``."""
    sol = solve_ising_system(order)
    w = GSeries.one(order) - GSeries.monomial(order, 2, 2)
    P = sol.V * w.inverse()
    x = (w * w).shift(1)
    v = GSeries.monomial(order, 1, 1)
    one_minus = 1 - 3 * x * P
    return (P - 1 - 3 * x * x * P ** 3) * one_minus * one_minus - v * v * P


__all__ = [
    "ConvergenceError", "HPSystemSolution", "IsingSystemSolution", "solve_hp_system",
    "hp_residuals", "g_leaf_bud", "g_bmhp", "binomial", "closed_formula", "closed_formula_at",
    "free_energy", "marking_operator", "unrooted_lhs", "free_energy_log_check",
    "conjugation_checks", "solve_ising_system", "ising_residuals", "g_qtising",
    "eqforP_residual", "ONE",
]
