"""Exact scalars: rationals (``fractions.Fraction``) and polynomials in ``s``."""

from __future__ import annotations

from fractions import Fraction
from math import factorial, perm
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def falling(a: int, k: int) -> int:
    """Falling factorial a(a-1)...(a-k+1); valid for negative ``a``."""
    if k < 0:
        raise ValueError("falling factorial needs k >= 0")
    if a >= 0:
        return perm(a, k)
    out = 1
    for j in range(k):
        out *= a - j
    return out


def binom(t: int, i: int) -> Fraction:
    """Generalized binomial t(t-1)...(t-i+1)/i! for any integer t."""
    return Fraction(falling(t, i), factorial(i))


class UniPoly:
    """Dense polynomial in ``s`` with rational coefficients.

    ``coeffs[k]`` is the coefficient of ``s**k``; trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    @classmethod
    def s(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "UniPoly":
        """Monic polynomial prod (s - r)."""
        out = cls.const(1)
        for r in roots:
            out = out * cls((-Fraction(r), 1))
        return out

    @classmethod
    def binomial_s(cls, i: int) -> "UniPoly":
        """The polynomial (s choose i) = s(s-1)...(s-i+1)/i!."""
        out = cls.const(1)
        for j in range(i):
            out = out * cls((-j, 1))
        return out * Fraction(1, factorial(i))

    @staticmethod
    def coerce(x) -> "UniPoly":
        if isinstance(x, UniPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return UniPoly.const(x)
        return NotImplemented

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def constant_value(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, n: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead())

    def denominator_lcm(self) -> int:
        from math import lcm

        return lcm(1, *(c.denominator for c in self.coeffs))

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = UniPoly.coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = UniPoly.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return UniPoly()
            return UniPoly(c * other for c in self.coeffs)
        other = UniPoly.coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = UniPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = other.lead()
        dv = other.degree
        for k in range(len(rem) - 1, dv - 1, -1):
            c = rem[k] / lead
            if c:
                q[k - dv] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dv + j] -= c * b
        return UniPoly(q), UniPoly(rem)

    def shift(self, k: Scalar) -> "UniPoly":
        """The polynomial s -> p(s + k)."""
        out = UniPoly()
        lin = UniPoly((k, 1))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        other = UniPoly.coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"UniPoly({self.to_text()})"

    def to_text(self) -> str:
        """Canonical text, parseable by the expression DSL."""
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            cs = str(mag)
            if k == 0:
                body = cs
            else:
                mono = "s" if k == 1 else f"s^{k}"
                body = mono if mag == 1 else f"{cs}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text
