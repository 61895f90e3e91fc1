"""Exact Gaussian-rational scalars.

Coefficients of trigonometric polynomials and chain weights live in
Q(i) whenever the group data is exact.  Mixing a :class:`GaussianRational`
with a Python ``float``/``complex`` drops to the floating tower.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = ["GaussianRational", "Scalar", "as_exact", "is_exact", "is_zero", "to_complex", "ZERO", "ONE", "I"]


class GaussianRational:
    """Immutable element re + i*im of Q(i)."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self._hash = None

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        obj._hash = None
        return obj

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational._raw(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational._raw(self.re - other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return GaussianRational._raw(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.reciprocal()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._raw(self.re / other, self.im / other)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other) * self.reciprocal()
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # -- comparison / conversion --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.re) if self.im == 0 else hash((self.re, self.im))
        return self._hash

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[GaussianRational, complex, float, int, Fraction]

ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def is_exact(z) -> bool:
    return isinstance(z, (GaussianRational, int, Rational))


def as_exact(z) -> GaussianRational:
    """Coerce an int/Fraction/GaussianRational to the exact tower."""
    if isinstance(z, GaussianRational):
        return z
    if isinstance(z, (int, Rational)):
        return GaussianRational(z)
    raise TypeError(f"{z!r} is not an exact scalar")


def is_zero(z, tol: float = 0.0) -> bool:
    if is_exact(z):
        return not z
    return abs(z) <= tol


def to_complex(z) -> complex:
    return complex(z)
