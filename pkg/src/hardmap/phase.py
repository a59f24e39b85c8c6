"""Critical line, tricritical constants and growth-exponent fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .solver import closed_formula_at

Real = Union[float, Fraction]

Z_PLUS = Fraction(2 ** 5)
Z_MINUS = Fraction(-(2 ** 9), 5 ** 5)
# g_+ = sqrt(15)/2^6 and g_- = 5^3 sqrt(15)/2^10, squared
G2_PLUS = Fraction(15, 2 ** 12)
G2_MINUS = Fraction(5 ** 6 * 15, 2 ** 20)
U_MINUS = Fraction(-1, 10)
U_PLUS = Fraction(1, 2)


@dataclass(frozen=True)
class CriticalPoint:
    z: Real
    g_c_squared: Real
    branch: str  # "high-z" | "parametric"
    u: Real | None = None

    @property
    def g_c(self) -> float:
        return math.sqrt(self.g_c_squared)


def z_of_u(u: Real) -> Real:
    return 4 * u * (1 + 2 * u) ** 4


def g2_of_u(u: Real) -> Real:
    return (1 + 8 * u + 10 * u * u) / (8 * (1 + 2 * u) ** 8)


def g2_high(z: Real) -> Real:
    return 1 / (8 * z) - 1 / (4 * z * z) if isinstance(z, float) else \
        Fraction(1, 8) / z - Fraction(1, 4) / (z * z)


def parametric_point(u: Real) -> CriticalPoint:
    return CriticalPoint(z_of_u(u), g2_of_u(u), "parametric", u)


def _check_monotone(samples: int = 512) -> None:
    lo, hi = float(U_MINUS), float(U_PLUS)
    prev = -math.inf
    for k in range(samples + 1):
        z = z_of_u(lo + (hi - lo) * k / samples)
        if z < prev:
            raise ArithmeticError("z(u) is not monotone on the parametric bracket")
        prev = z


def solve_u(z: float) -> float:
    """Invert ``z = 4u(1+2u)^4`` on ``[-1/10, 1/2]`` by bisection."""
    lo, hi = float(U_MINUS), float(U_PLUS)
    if not z_of_u(lo) <= z <= z_of_u(hi):
        raise ValueError(f"z={z} outside the parametric range")
    # runs to full double precision, well past the 1e-14 relative target
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if z_of_u(mid) < z:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_check_monotone()


def critical_line(z: Real) -> CriticalPoint:
    if z < Z_MINUS:
        raise ValueError(f"z={z} is below z_- = {Z_MINUS}; g_c is not defined there")
    if z >= Z_PLUS:
        return CriticalPoint(z, g2_high(z), "high-z")
    if isinstance(z, Fraction) and z == Z_MINUS:
        return parametric_point(U_MINUS)
    u = solve_u(float(z))
    return CriticalPoint(z, g2_of_u(u), "parametric", u)


def tricritical_points() -> tuple[CriticalPoint, CriticalPoint]:
    """``(z_-, g_-^2)`` and ``(z_+, g_+^2)`` as exact rationals."""
    minus = CriticalPoint(Z_MINUS, G2_MINUS, "parametric", U_MINUS)
    plus = CriticalPoint(Z_PLUS, G2_PLUS, "parametric", U_PLUS)
    return minus, plus


def log_rational(x: Fraction) -> float:
    """Natural log of a positive rational with big numerator/denominator."""
    if x <= 0:
        raise ValueError("log of a non-positive number")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass
class GrowthFit:
    z: Fraction
    g_c_squared: float
    rows: list[tuple[int, float]] = field(default_factory=list)  # (n, slope over [n, 2n])
    extrapolated: list[float] = field(default_factory=list)

    @property
    def gamma(self) -> float:
        return self.extrapolated[-1]


def richardson_at_zero(xs: list[float], ys: list[float]) -> list[float]:
    """Richardson table evaluated at ``x = 0``; entry ``L`` uses the last ``L+1`` points."""
    table = [[y] for y in ys]
    for k in range(1, len(xs)):
        for level in range(1, k + 1):
            prev, left = table[k][level - 1], table[k - 1][level - 1]
            table[k].append(prev + (prev - left) * xs[k] / (xs[k - level] - xs[k]))
    return table[-1]


def growth_fit(z: Real, n_min: int, n_max: int) -> GrowthFit:
    """Fit ``G_{2n}(z) g_c^{2n} ~ C n^{-gamma}``.

    Slopes of ``log(G_{2n} g_c^{2n})`` against ``log n`` are taken over the
    doubling pairs ``[m, 2m]`` with ``m = n_max/2, n_max/4, ... >= n_min`` and
    extrapolated in ``1/m`` (Richardson / Neville).
    """
    z = Fraction(z)
    ms = []
    m = n_max // 2
    while m >= max(n_min, 1):
        ms.append(m)
        m //= 2
    if len(ms) < 2:
        raise ValueError(f"n range [{n_min}, {n_max}] too short for an extrapolated fit")
    ms.reverse()
    log_g2 = math.log(float(critical_line(z).g_c_squared))
    cache: dict[int, float] = {}

    def f(n: int) -> float:
        if n not in cache:
            a = closed_formula_at(n, z)
            cache[n] = log_rational(a) + n * log_g2
        return cache[n]

    fit = GrowthFit(z, math.exp(log_g2))
    for m in ms:
        fit.rows.append((m, -(f(2 * m) - f(m)) / math.log(2)))
    xs = [1.0 / m for m, _ in fit.rows]
    ys = [s for _, s in fit.rows]
    # largest m last so each level uses the best data
    fit.extrapolated = richardson_at_zero(xs, ys)
    return fit


def growth_exponent(z: Real, n_min: int, n_max: int) -> float:
    return growth_fit(z, n_min, n_max).gamma
