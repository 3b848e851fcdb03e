"""Coefficient rings: integers, rationals and prime fields, all exact.

Ring elements are plain Python values (int for Z and GF(p), Fraction for Q);
the CoeffRing object knows how to normalize and combine them.  Arbitrary
precision is inherited from Python ints, which matters for Smith normal form
where intermediate entries can grow without bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoeffRing:
    """One of Z, Q or GF(p).  kind is "Z", "Q" or "F"."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError("unknown ring kind %r" % (self.kind,))
        if self.kind == "F":
            if self.p is None or not _is_prime(self.p):
                raise ValueError("prime field needs a prime, got %r" % (self.p,))
        elif self.p is not None:
            raise ValueError("p only makes sense for prime fields")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def integers():
        return CoeffRing("Z")

    @staticmethod
    def rationals():
        return CoeffRing("Q")

    @staticmethod
    def prime_field(p):
        return CoeffRing("F", p)

    # -- element ops ----------------------------------------------------
    @property
    def is_field(self):
        return self.kind != "Z"

    def coerce(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("%s is not an integer" % (x,))
                return int(x)
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            num, den = x.numerator, x.denominator
            return (num * self.inv(den % self.p)) % self.p
        return int(x) % self.p

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_zero(self, x):
        return x == 0

    def add(self, a, b):
        return self.coerce(a + b)

    def sub(self, a, b):
        return self.coerce(a - b)

    def mul(self, a, b):
        return self.coerce(a * b)

    def neg(self, a):
        return self.coerce(-a)

    def inv(self, a):
        """Multiplicative inverse; extended gcd mod p, exact over Q."""
        if self.is_zero(self.coerce(a)):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Q":
            return Fraction(1) / Fraction(a)
        if self.kind == "F":
            return pow(int(a) % self.p, self.p - 2, self.p)
        if a in (1, -1):
            return a
        raise ValueError("%s is not a unit in Z" % (a,))

    def is_unit(self, a):
        a = self.coerce(a)
        if self.is_zero(a):
            return False
        return self.kind != "Z" or a in (1, -1)

    def name(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        return "F%d" % self.p


ZZ = CoeffRing.integers()
QQ = CoeffRing.rationals()
