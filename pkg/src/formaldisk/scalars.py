"""Scalar rings for jet coefficients.

The default coefficient ring is ``fractions.Fraction``.  For the van Est
derivative of group cochains we also need the rank-4 extension
``Q[s,u]/(s^2, u^2)``; :class:`NilpotentPair` models it exactly.  Jet and
form arithmetic only uses ``+``, ``-``, ``*``, division by units and
truthiness, so either ring can sit in a coefficient slot.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class NilpotentPair:
    """Element a + b*s + c*u + d*s*u of Q[s,u]/(s^2, u^2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = rat(a)
        self.b = rat(b)
        self.c = rat(c)
        self.d = rat(d)

    S: "NilpotentPair"
    U: "NilpotentPair"

    @classmethod
    def promote(cls, x) -> "NilpotentPair":
        if isinstance(x, NilpotentPair):
            return x
        return cls(rat(x))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other):
        o = NilpotentPair.promote(other)
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __add__(self, other):
        o = NilpotentPair.promote(other)
        return NilpotentPair(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return NilpotentPair(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-NilpotentPair.promote(other))

    def __rsub__(self, other):
        return NilpotentPair.promote(other) + (-self)

    def __mul__(self, other):
        o = NilpotentPair.promote(other)
        return NilpotentPair(
            self.a * o.a,
            self.a * o.b + self.b * o.a,
            self.a * o.c + self.c * o.a,
            self.a * o.d + self.d * o.a + self.b * o.c + self.c * o.b,
        )

    __rmul__ = __mul__

    def inverse(self) -> "NilpotentPair":
        if not self.a:
            raise ZeroDivisionError("NilpotentPair with zero body is not a unit")
        ia = 1 / self.a
        return NilpotentPair(
            ia,
            -self.b * ia * ia,
            -self.c * ia * ia,
            -self.d * ia * ia + 2 * self.b * self.c * ia * ia * ia,
        )

    def __truediv__(self, other):
        o = NilpotentPair.promote(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return NilpotentPair.promote(other) * self.inverse()

    def __repr__(self):
        return f"NilpotentPair({self.a}, {self.b}, {self.c}, {self.d})"


NilpotentPair.S = NilpotentPair(0, 1, 0, 0)
NilpotentPair.U = NilpotentPair(0, 0, 1, 0)


def is_unit(x) -> bool:
    """True when x is invertible in its scalar ring."""
    if isinstance(x, NilpotentPair):
        return bool(x.a)
    return bool(x)


def scalar_inv(x):
    if isinstance(x, NilpotentPair):
        return x.inverse()
    return Fraction(1) / rat(x)
