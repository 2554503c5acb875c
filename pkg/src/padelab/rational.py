"""Exact rational-complex scalars for the exact pipelines.

A :class:`QC` is a complex number whose real and imaginary parts are
`fractions.Fraction` values, so ring and field operations are exact.
`complex(q)` gives the correctly rounded double view of each component.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

_F0 = Fraction(0)
_F1 = Fraction(1)

ExactScalar = Union[int, Fraction, "QC"]


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or literal like '1/4', '0.25', '3'."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not an exact rational value: {x!r}")


class QC:
    """Complex number with exact rational real/imaginary parts.

    Instances are treated as immutable values; arithmetic returns new
    objects and never mutates the operands.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    # internal fast constructor: arguments must already be Fractions
    @staticmethod
    def _mk(re: Fraction, im: Fraction) -> "QC":
        q = QC.__new__(QC)
        q.re = re
        q.im = im
        return q

    # -- basic queries -------------------------------------------------

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "QC":
        return QC._mk(self.re, -self.im)

    # -- conversions ---------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __float__(self) -> float:
        if self.im != 0:
            raise TypeError("cannot convert complex QC to float")
        return float(self.re)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QC._mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QC._mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QC._mk(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return QC._mk(-self.re, -self.im)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QC._mk(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero QC")
        return QC._mk((self.re * o.re + self.im * o.im) / d,
                      (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return (1 / self) ** (-e)
        result = QC._mk(_F1, _F0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QC({self.re})"
        return f"QC({self.re}, {self.im})"


def _coerce(x) -> QC | None:
    if isinstance(x, QC):
        return x
    if isinstance(x, (int, Fraction)):
        return QC._mk(as_fraction(x), _F0)
    return None


def qc(x, im=None) -> QC:
    """Coerce a value (or a re/im pair) to :class:`QC`."""
    if im is not None:
        return QC(x, im)
    if isinstance(x, QC):
        return x
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return QC(x[0], x[1])
    return QC(x)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QC)) or isinstance(x, Rational)


def to_complex(x) -> complex:
    """Double-precision view of any supported scalar."""
    if isinstance(x, QC):
        return complex(x)
    if isinstance(x, Fraction):
        return complex(float(x), 0.0)
    return complex(x)


def horner(coeffs: Iterable, z):
    """Evaluate sum(coeffs[j] * z**j) by Horner's rule.

    Works over any common scalar domain (QC with QC/rational z, or
    complex with complex z); the caller keeps the domain homogeneous.
    """
    coeffs = list(coeffs)
    if not coeffs:
        return 0 * z
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def poly_derivative(coeffs: Iterable) -> list:
    """Coefficients of the derivative of an ascending-order polynomial."""
    return [j * c for j, c in enumerate(coeffs)][1:]
