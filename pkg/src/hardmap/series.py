"""Exact truncated power series in ``g`` with polynomial coefficients in ``z``.

A :class:`ZPoly` is a polynomial in ``z`` over the rationals, stored as a tuple
of integer numerators over one positive common denominator.  A
:class:`GSeries` is a power series in ``g`` truncated at a fixed order whose
coefficients are ``ZPoly`` values.  Everything is immutable and exact.

Binary operations between two series truncate to the smaller order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


def _strip(nums: list[int]) -> list[int]:
    while nums and nums[-1] == 0:
        nums.pop()
    return nums


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class ZPoly:
    """Polynomial in ``z`` with exact rational coefficients."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Iterable[int] = (), den: int = 1):
        nums = _strip([int(c) for c in num])
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            nums = [-c for c in nums]
            den = -den
        if not nums:
            den = 1
        elif den != 1:
            common = gcd(den, *nums)
            if common != 1:
                nums = [c // common for c in nums]
                den //= common
        self.num: tuple[int, ...] = tuple(nums)
        self.den: int = den
        self._hash: int | None = None

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar]) -> "ZPoly":
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = _lcm(den, f.denominator)
        return cls([f.numerator * (den // f.denominator) for f in fracs], den)

    @classmethod
    def const(cls, c: Scalar) -> "ZPoly":
        c = Fraction(c)
        return cls([c.numerator], c.denominator)

    @classmethod
    def monomial(cls, power: int, c: Scalar = 1) -> "ZPoly":
        c = Fraction(c)
        return cls([0] * power + [c.numerator], c.denominator)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num) - 1

    def is_zero(self) -> bool:
        return not self.num

    def is_integral(self) -> bool:
        return self.den == 1

    def __getitem__(self, j: int) -> Fraction:
        if 0 <= j < len(self.num):
            return Fraction(self.num[j], self.den)
        return Fraction(0)

    def int_coeffs(self) -> list[int]:
        if self.den != 1:
            raise ValueError(f"non-integral polynomial {self}")
        return list(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ZPoly.const(other)
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other: "ZPoly | Scalar") -> "ZPoly":
        if not isinstance(other, ZPoly):
            other = ZPoly.const(other)
        if other.den == self.den:
            a, b, den = self.num, other.num, self.den
        else:
            den = _lcm(self.den, other.den)
            sa, sb = den // self.den, den // other.den
            a = [c * sa for c in self.num]
            b = [c * sb for c in other.num]
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] += c
        return ZPoly(out, den)

    __radd__ = __add__

    def __neg__(self) -> "ZPoly":
        return ZPoly([-c for c in self.num], self.den)

    def __sub__(self, other: "ZPoly | Scalar") -> "ZPoly":
        if not isinstance(other, ZPoly):
            other = ZPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "ZPoly":
        return ZPoly.const(other) - self

    def __mul__(self, other: "ZPoly | Scalar") -> "ZPoly":
        if not isinstance(other, ZPoly):
            c = Fraction(other)
            return ZPoly([x * c.numerator for x in self.num], self.den * c.denominator)
        if not self.num or not other.num:
            return ZPoly()
        return ZPoly(_convolve(self.num, other.num), self.den * other.den)

    __rmul__ = __mul__

    def __call__(self, z: Scalar) -> Fraction:
        acc = 0
        z = Fraction(z)
        for c in reversed(self.num):
            acc = acc * z + c
        return Fraction(acc) / self.den

    def deriv(self) -> "ZPoly":
        return ZPoly([j * c for j, c in enumerate(self.num)][1:], self.den)

    def z_euler(self) -> "ZPoly":
        """``z d/dz``: multiply the coefficient of ``z^j`` by ``j``."""
        return ZPoly([j * c for j, c in enumerate(self.num)], self.den)

    def __repr__(self) -> str:
        return f"ZPoly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_zpoly(self)


def _convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, cb in enumerate(b):
        if cb:
            for i, ca in enumerate(a, j):
                out[i] += ca * cb
    return out


def format_zpoly(p: ZPoly, var: str = "z") -> str:
    """Human readable form, lowest power first: ``288 + 2592z + 7584z^2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for j, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if j == 0:
            body = str(mag)
        else:
            head = "" if mag == 1 else str(mag)
            if mag.denominator != 1 and head:
                head = f"({head})"
            body = head + (var if j == 1 else f"{var}^{j}")
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


ZERO = ZPoly()
ONE = ZPoly([1])


class GSeries:
    """Power series in ``g`` truncated after ``g**order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable["ZPoly | Scalar"], order: int | None = None):
        polys = [c if isinstance(c, ZPoly) else ZPoly.const(c) for c in coeffs]
        if order is None:
            order = len(polys) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(polys) > order + 1:
            polys = polys[: order + 1]
        else:
            polys.extend([ZERO] * (order + 1 - len(polys)))
        self.order: int = order
        self.coeffs: tuple[ZPoly, ...] = tuple(polys)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "GSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "GSeries":
        return cls([ONE], order)

    @classmethod
    def monomial(cls, order: int, g_power: int, z_power: int = 0, c: Scalar = 1) -> "GSeries":
        coeffs: list[ZPoly] = [ZERO] * (order + 1)
        if g_power <= order:
            coeffs[g_power] = ZPoly.monomial(z_power, c)
        return cls(coeffs, order)

    @classmethod
    def from_terms(cls, order: int, terms: Mapping[tuple[int, int], Scalar]) -> "GSeries":
        """Build from ``{(g_power, z_power): coefficient}``."""
        rows: list[dict[int, Fraction]] = [{} for _ in range(order + 1)]
        for (a, b), c in terms.items():
            if a <= order:
                rows[a][b] = rows[a].get(b, Fraction(0)) + Fraction(c)
        polys = []
        for row in rows:
            if not row:
                polys.append(ZERO)
                continue
            dense = [Fraction(0)] * (max(row) + 1)
            for b, c in row.items():
                dense[b] = c
            polys.append(ZPoly.from_coeffs(dense))
        return cls(polys, order)

    # -- access -------------------------------------------------------------

    def coeff(self, n: int) -> ZPoly:
        if not 0 <= n <= self.order:
            raise IndexError(f"g^{n} outside truncation order {self.order}")
        return self.coeffs[n]

    def __getitem__(self, n: int) -> ZPoly:
        return self.coeff(n)

    def terms(self) -> dict[tuple[int, int], Fraction]:
        out = {}
        for a, p in enumerate(self.coeffs):
            for b, c in enumerate(p.coeffs):
                if c:
                    out[(a, b)] = c
        return out

    def truncate(self, order: int) -> "GSeries":
        return GSeries(self.coeffs[: order + 1], min(order, self.order))

    def extend(self, order: int) -> "GSeries":
        """Same coefficients, padded with zeros up to ``order``."""
        return GSeries(self.coeffs, max(order, self.order))

    def is_integral(self) -> bool:
        return all(p.is_integral() for p in self.coeffs)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def subs_z(self, z: Scalar) -> list[Fraction]:
        return [p(z) for p in self.coeffs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"GSeries(order={self.order}, {format_gseries(self)})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "GSeries | Scalar") -> "GSeries":
        if not isinstance(other, GSeries):
            other = GSeries([ZPoly.const(other)], self.order)
        order = min(self.order, other.order)
        return GSeries([a + b for a, b in zip(self.coeffs[: order + 1], other.coeffs)], order)

    __radd__ = __add__

    def __neg__(self) -> "GSeries":
        return GSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other: "GSeries | Scalar") -> "GSeries":
        if not isinstance(other, GSeries):
            other = GSeries([ZPoly.const(other)], self.order)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "GSeries":
        return (-self) + other

    def __mul__(self, other: "GSeries | ZPoly | Scalar") -> "GSeries":
        if isinstance(other, GSeries):
            return _series_product(self, other)
        return GSeries([a * other for a in self.coeffs], self.order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = GSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int = 1) -> "GSeries":
        """Multiply by ``g**k``, keeping the truncation order."""
        return GSeries([ZERO] * k + list(self.coeffs[: self.order + 1 - k]), self.order)

    def mul_z(self, k: int = 1) -> "GSeries":
        return GSeries([ZPoly((0,) * k + p.num, p.den) for p in self.coeffs], self.order)

    def inverse(self) -> "GSeries":
        """Multiplicative inverse; the ``g^0`` coefficient must be a nonzero constant."""
        c0 = self.coeffs[0]
        if c0.is_zero() or c0.degree > 0:
            raise ZeroDivisionError(f"constant term {c0} is not an invertible constant")
        inv0 = Fraction(c0.den, c0.num[0])
        out: list[ZPoly] = [ZPoly.const(inv0)]
        for n in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero() and not out[n - k].is_zero():
                    acc = acc + self.coeffs[k] * out[n - k]
            out.append(acc * (-inv0))
        return GSeries(out, self.order)

    def __truediv__(self, other: "GSeries | Scalar") -> "GSeries":
        if isinstance(other, GSeries):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def deriv_g(self) -> "GSeries":
        """``d/dg``; the result has order ``order - 1``."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 series")
        return GSeries([p * n for n, p in enumerate(self.coeffs)][1:], self.order - 1)

    def deriv_z(self) -> "GSeries":
        return GSeries([p.deriv() for p in self.coeffs], self.order)

    def g_euler(self) -> "GSeries":
        """``g d/dg``, order preserving."""
        return GSeries([p * n for n, p in enumerate(self.coeffs)], self.order)

    def z_euler(self) -> "GSeries":
        """``z d/dz``, order preserving."""
        return GSeries([p.z_euler() for p in self.coeffs], self.order)

    def integrate_g(self) -> "GSeries":
        """Antiderivative in ``g`` with zero constant term; order grows by one."""
        return GSeries([ZERO] + [p * Fraction(1, n + 1) for n, p in enumerate(self.coeffs)],
                       self.order + 1)

    def log(self) -> "GSeries":
        if self.coeffs[0] != ONE:
            raise ValueError(f"log needs constant term 1, got {self.coeffs[0]}")
        if self.order == 0:
            return GSeries.zero(0)
        quotient = self.deriv_g() * self.truncate(self.order - 1).inverse()
        return quotient.integrate_g()


def _common_form(s: GSeries, order: int) -> tuple[list[tuple[int, ...]], int]:
    den = 1
    for p in s.coeffs[: order + 1]:
        if p.den != 1:
            den = _lcm(den, p.den)
    if den == 1:
        return [p.num for p in s.coeffs[: order + 1]], 1
    return [tuple(c * (den // p.den) for c in p.num) for p in s.coeffs[: order + 1]], den


def _series_product(a: GSeries, b: GSeries) -> GSeries:
    order = min(a.order, b.order)
    an, ad = _common_form(a, order)
    bn, bd = _common_form(b, order)
    den = ad * bd
    acc: list[list[int]] = [[] for _ in range(order + 1)]
    for i, pa in enumerate(an):
        if not pa:
            continue
        for j in range(order + 1 - i):
            pb = bn[j]
            if not pb:
                continue
            row = acc[i + j]
            need = len(pa) + len(pb) - 1
            if len(row) < need:
                row.extend([0] * (need - len(row)))
            for k, cb in enumerate(pb):
                if cb:
                    for m, ca in enumerate(pa, k):
                        row[m] += ca * cb
    return GSeries([ZPoly(row, den) for row in acc], order)


def format_gseries(s: GSeries, var: str = "g") -> str:
    parts = []
    for n, p in enumerate(s.coeffs):
        if p.is_zero():
            continue
        mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
        body = format_zpoly(p)
        if n == 0:
            parts.append(body)
        elif len(p.num) == 1 and p.den == 1 and p.num[0] == 1:
            parts.append(mono)
        else:
            parts.append(f"{mono} ({body})")
    parts.append(f"O({var}^{s.order + 1})")
    return " + ".join(parts)


# Functional aliases used throughout the package.

def series_add(a: GSeries, b: GSeries) -> GSeries:
    return a + b


def series_mul(a: GSeries, b: GSeries) -> GSeries:
    return a * b


def series_inverse(a: GSeries) -> GSeries:
    return a.inverse()


def series_log(a: GSeries) -> GSeries:
    return a.log()


def series_deriv(a: GSeries, var: str = "g") -> GSeries:
    if var == "g":
        return a.deriv_g()
    if var == "z":
        return a.deriv_z()
    raise ValueError(f"unknown variable {var!r}")


def series_coeff(a: GSeries, n: int) -> ZPoly:
    return a.coeff(n)
