"""Exact arithmetic in the cyclotomic ring Z[w, 1/sqrt(2)] with w = exp(i*pi/4).

Every value is stored as (a + b*w + c*w^2 + d*w^3) / sqrt(2)^k with integer
coefficients and k >= 0, using the relation w^4 = -1.  The representative is
canonical: k is minimal (a denominator exponent is only kept when the
numerator cannot absorb another factor of sqrt(2)), and zero is always
(0, 0, 0, 0) with k = 0.  This makes equality and hashing structural.

The ring contains all matrix entries produced by the C4-phased generators of
the supported graphical calculi, so diagram evaluation stays exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

import mpmath

# Largest coefficient magnitude / denominator exponent for which to_approx
# guarantees a correctly rounded double (see to_approx).
COEFF_LIMIT = 1 << 40
K_LIMIT = 64

_TEXT_RE = re.compile(
    r"^\(\((-?\d+)\)\s*\+\s*\((-?\d+)\)w\s*\+\s*\((-?\d+)\)w\^2\s*"
    r"\+\s*\((-?\d+)\)w\^3\)/sqrt2\^(\d+)$"
)


def _reduce(a: int, b: int, c: int, d: int, k: int) -> tuple[int, int, int, int, int]:
    """Bring a raw representative to canonical (minimal-k) form."""
    if a == 0 and b == 0 and c == 0 and d == 0:
        return 0, 0, 0, 0, 0
    while k > 0 and (a - c) % 2 == 0 and (b - d) % 2 == 0:
        a, b, c, d = (b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2
        k -= 1
    return a, b, c, d, k


@dataclass(frozen=True, slots=True)
class CycloNum:
    """One element of Z[w, 1/sqrt(2)], canonically reduced on construction."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("denominator exponent must be non-negative")
        a, b, c, d, k = _reduce(self.a, self.b, self.c, self.d, self.k)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "k", k)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "CycloNum":
        return CycloNum(n, 0, 0, 0, 0)

    @staticmethod
    def zero() -> "CycloNum":
        return CycloNum(0, 0, 0, 0, 0)

    @staticmethod
    def one() -> "CycloNum":
        return CycloNum(1, 0, 0, 0, 0)

    @staticmethod
    def i() -> "CycloNum":
        return CycloNum(0, 0, 1, 0, 0)

    @staticmethod
    def omega(power: int = 1) -> "CycloNum":
        """w^power for any integer power (w^4 = -1, so w has order 8)."""
        power %= 8
        sign = 1
        if power >= 4:
            sign, power = -1, power - 4
        coeffs = [0, 0, 0, 0]
        coeffs[power] = sign
        return CycloNum(*coeffs, 0)

    @staticmethod
    def sqrt2() -> "CycloNum":
        return CycloNum(0, 1, 0, -1, 0)

    @staticmethod
    def inv_sqrt2(power: int = 1) -> "CycloNum":
        """(1/sqrt(2))^power, power >= 0."""
        return CycloNum(1, 0, 0, 0, power)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring operations ----------------------------------------------------

    def _lift(self, k: int) -> tuple[int, int, int, int]:
        """Coefficients of self rewritten with denominator exponent k >= self.k."""
        a, b, c, d = self.a, self.b, self.c, self.d
        for _ in range(k - self.k):
            # multiply the numerator by sqrt(2) = w - w^3
            a, b, c, d = b - d, a + c, b + d, c - a
        return a, b, c, d

    def __add__(self, other: "CycloNum | int") -> "CycloNum":
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        k = max(self.k, other.k)
        a1, b1, c1, d1 = self._lift(k)
        a2, b2, c2, d2 = other._lift(k)
        return CycloNum(a1 + a2, b1 + b2, c1 + c2, d1 + d2, k)

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other: "CycloNum | int") -> "CycloNum":
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "CycloNum | int") -> "CycloNum":
        return (-self) + other

    def __mul__(self, other: "CycloNum | int") -> "CycloNum":
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return CycloNum(
            a1 * a2 - b1 * d2 - c1 * c2 - d1 * b2,
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + b1 * b2 + c1 * a2 - d1 * d2,
            a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2,
            self.k + other.k,
        )

    __rmul__ = __mul__

    def conj(self) -> "CycloNum":
        """Complex conjugate (w -> w^-1 = -w^3)."""
        return CycloNum(self.a, -self.d, -self.c, -self.b, self.k)

    # -- conversion ---------------------------------------------------------

    def to_approx(self) -> complex:
        """Correctly rounded complex double of the exact value.

        Computed through a 120-bit intermediate, so the result is the nearest
        double; the absolute error is below 1e-12 whenever |value| < ~4e3 and
        the relative error never exceeds 2^-52.  Raises OverflowError outside
        the guaranteed-precision region (|coeff| >= 2^40 or k > 64).
        """
        if max(abs(self.a), abs(self.b), abs(self.c), abs(self.d)) >= COEFF_LIMIT:
            raise OverflowError("coefficient too large for guaranteed precision")
        if self.k > K_LIMIT:
            raise OverflowError("denominator exponent too large for guaranteed precision")
        with mpmath.workprec(120):
            r2 = mpmath.sqrt(2)
            scale = r2 ** self.k
            re = (self.a + (self.b - self.d) / r2) / scale
            im = (self.c + (self.b + self.d) / r2) / scale
            return complex(float(re), float(im))

    def __complex__(self) -> complex:
        return self.to_approx()

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        return (
            f"(({self.a}) + ({self.b})w + ({self.c})w^2 + ({self.d})w^3)"
            f"/sqrt2^{self.k}"
        )

    @staticmethod
    def from_text(text: str) -> "CycloNum":
        m = _TEXT_RE.match(text.strip())
        if m is None:
            raise ValueError(f"not a cyclotomic literal: {text!r}")
        a, b, c, d, k = (int(g) for g in m.groups())
        return CycloNum(a, b, c, d, k)

    def __str__(self) -> str:
        return self.to_text()


def exact_div(x: CycloNum, y: CycloNum) -> CycloNum:
    """x / y when the quotient lies in the ring; raises otherwise.

    Division goes through the field Q(w): multiply by conj(y) to get a real
    denominator p + q*sqrt(2), rationalize, then check the leftover integer
    denominator is (up to sign) a power of two, which sqrt(2)-denominators can
    absorb.
    """
    if y.is_zero():
        raise ZeroDivisionError("division by zero CycloNum")
    num = x * y.conj()
    yy = y * y.conj()  # real: (p + q*sqrt(2)) / sqrt(2)^(2k), c == 0, d == -b
    p, q = yy.a, yy.b
    denom = p * p - 2 * q * q
    # num / yy = num * (p - q*sqrt(2)) * sqrt(2)^(yy.k) / denom
    num = num * CycloNum(p, -q, 0, q, 0)
    for _ in range(yy.k):
        num = num * CycloNum.sqrt2()
    if denom < 0:
        num, denom = -num, -denom
    coeffs = [num.a, num.b, num.c, num.d]
    g = denom
    for co in coeffs:
        g = gcd(g, co)
    coeffs = [co // g for co in coeffs]
    denom //= g
    # denom must now be a power of two: 1/2 == sqrt(2)^-2 is representable
    if denom & (denom - 1):
        raise ValueError("quotient not representable in Z[w, 1/sqrt2]")
    extra_k = 2 * (denom.bit_length() - 1)
    return CycloNum(*coeffs, num.k + extra_k)
