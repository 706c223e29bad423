"""Magnitude-tracked complex scalars.

Values are stored as ``mantissa * 2**exp`` with the mantissa renormalized
into a wide band, so products of degree-4096 polynomial factors never
overflow a double.  Only the final conversion back to ``complex`` can go
out of range.
"""
from __future__ import annotations

import cmath
import math

from .errors import EvaluationRangeError

_LN2 = math.log(2.0)
_BAND = 256  # renormalize when |mantissa| leaves [2**-256, 2**256]


class SC:
    """Complex scalar with an explicit power-of-two exponent."""

    __slots__ = ("m", "e")

    def __init__(self, m: complex, e: int = 0):
        if m == 0:
            self.m = 0j
            self.e = 0
            return
        a = abs(m)
        if a != a:  # NaN mantissa: arithmetic on non-finite input
            raise EvaluationRangeError("non-finite value in scaled arithmetic")
        ex = math.frexp(a)[1]
        if ex > _BAND or ex < -_BAND:
            m *= math.ldexp(1.0, -ex)
            e += ex
        self.m = complex(m)
        self.e = e

    # -- predicates ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.m == 0

    # -- arithmetic ------------------------------------------------------
    def __mul__(self, other: "SC") -> "SC":
        return SC(self.m * other.m, self.e + other.e)

    def __add__(self, other: "SC") -> "SC":
        d = self.e - other.e
        if other.m == 0:
            return self
        if self.m == 0:
            return other
        if d >= 0:
            if d > 1080:
                return self
            return SC(self.m + other.m * math.ldexp(1.0, -d), self.e)
        if d < -1080:
            return other
        return SC(other.m + self.m * math.ldexp(1.0, d), other.e)

    def __sub__(self, other: "SC") -> "SC":
        return self + other.neg()

    def neg(self) -> "SC":
        return SC(-self.m, self.e)

    def scale(self, c: complex) -> "SC":
        """Multiply by an ordinary complex scalar."""
        if c == 0:
            return SC(0j)
        return SC(self.m * c, self.e)

    def __truediv__(self, other: "SC") -> "SC":
        if other.m == 0:
            raise ZeroDivisionError("scaled division by zero")
        return SC(self.m / other.m, self.e - other.e)

    def pow_int(self, n: int) -> "SC":
        out = SC(1.0 + 0j)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- conversions -----------------------------------------------------
    def to_complex(self) -> complex:
        if self.m == 0:
            return 0j
        if self.e > 1023 or (self.e < -1140):
            if self.e > 1023:
                raise EvaluationRangeError(
                    f"value overflows double (exp2={self.e})")
            return 0j  # harmless underflow
        s = math.ldexp(1.0, self.e)
        out = self.m * s
        if out.real != out.real or abs(out) == math.inf:
            raise EvaluationRangeError("value overflows double")
        return out

    def log_abs(self) -> float:
        if self.m == 0:
            raise ValueError("log of zero")
        return math.log(abs(self.m)) + self.e * _LN2

    def phase(self) -> float:
        return cmath.phase(self.m)

    def abs_cmp(self, other: "SC") -> int:
        """Sign of |self| - |other| without leaving the representable range."""
        if self.m == 0:
            return 0 if other.m == 0 else -1
        if other.m == 0:
            return 1
        a, b = self.log_abs(), other.log_abs()
        return (a > b) - (a < b)

    def __repr__(self):
        return f"SC({self.m!r}, 2**{self.e})"


SC_ZERO = SC(0j)
SC_ONE = SC(1.0 + 0j)


def sc_from(c: complex) -> SC:
    return SC(complex(c))
