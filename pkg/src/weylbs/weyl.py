"""Normal-ordered arithmetic in the Weyl algebra over Q[s].

An element is a finite sum of terms ``c(s) * x^a * d^b`` with every x-factor
written to the left of every partial derivative.  Exponent vectors ``a`` may
carry negative entries only when the element declares an inverted monomial
(a localization at ``f``); negative entries are then allowed exactly in the
variables dividing ``f``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .scalars import Scalar, UniPoly, binom, falling

Mono = tuple[int, ...]
Key = tuple[Mono, Mono]


class AmbientMismatch(ValueError):
    pass


class LocalizationError(ValueError):
    """Negative x-exponent without a declared inverted monomial."""


def _merge_inverted(a: Optional[Mono], b: Optional[Mono]) -> Optional[Mono]:
    if a is None:
        return b
    if b is None or a == b:
        return a
    return tuple(max(u, v) for u, v in zip(a, b))


def _check_laurent(nvars: int, xexp: Mono, inverted: Optional[Mono]) -> None:
    for i, e in enumerate(xexp):
        if e < 0 and (inverted is None or inverted[i] <= 0):
            raise LocalizationError(
                f"negative exponent in variable {i} without localization")


@lru_cache(maxsize=4096)
def _swap(b: int, a: int) -> tuple[tuple[int, int], ...]:
    # d^b x^a = sum_k C(b,k) a(a-1)..(a-k+1) x^(a-k) d^(b-k)
    out = []
    for k in range(b + 1):
        c = binom(b, k).numerator * falling(a, k)
        if c:
            out.append((k, c))
    return tuple(out)


class WeylElement:
    """Immutable sparse normal-ordered operator with coefficients in Q[s]."""

    __slots__ = ("nvars", "terms", "inverted", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Key, object] | None = None,
                 inverted: Optional[Sequence[int]] = None):
        self.nvars = nvars
        self.inverted: Optional[Mono] = tuple(inverted) if inverted is not None else None
        if self.inverted is not None and len(self.inverted) != nvars:
            raise AmbientMismatch("inverted monomial has wrong length")
        clean: dict[Key, UniPoly] = {}
        for (a, b), c in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != nvars or len(b) != nvars:
                raise AmbientMismatch(f"exponent length differs from {nvars}")
            if any(e < 0 for e in b):
                raise ValueError("partial exponents must be nonnegative")
            c = UniPoly.coerce(c)
            if c.is_zero():
                continue
            _check_laurent(nvars, a, self.inverted)
            clean[(a, b)] = c
        self.terms: dict[Key, UniPoly] = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, inverted) -> "WeylElement":
        # terms already clean and validated
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj.inverted = inverted
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "WeylElement":
        return cls(nvars)

    @classmethod
    def scalar(cls, nvars: int, c) -> "WeylElement":
        z = (0,) * nvars
        return cls(nvars, {(z, z): c})

    @classmethod
    def one(cls, nvars: int) -> "WeylElement":
        return cls.scalar(nvars, 1)

    @classmethod
    def monomial(cls, nvars: int, xexp: Sequence[int], dexp: Sequence[int] | None = None,
                 coeff=1, inverted: Optional[Sequence[int]] = None) -> "WeylElement":
        dexp = tuple(dexp) if dexp is not None else (0,) * nvars
        return cls(nvars, {(tuple(xexp), dexp): coeff}, inverted)

    @classmethod
    def x(cls, nvars: int, i: int, power: int = 1) -> "WeylElement":
        a = [0] * nvars
        a[i] = power
        inv = None
        if power < 0:
            inv = [0] * nvars
            inv[i] = 1
        return cls.monomial(nvars, a, inverted=inv)

    @classmethod
    def d(cls, nvars: int, i: int, power: int = 1) -> "WeylElement":
        b = [0] * nvars
        b[i] = power
        return cls.monomial(nvars, (0,) * nvars, b)

    @classmethod
    def mult(cls, element: Mapping[Mono, object], nvars: int,
             inverted: Optional[Sequence[int]] = None) -> "WeylElement":
        """Multiplication operator by a ring element {exponent: coeff}."""
        z = (0,) * nvars
        return cls(nvars, {(tuple(m), z): c for m, c in element.items()}, inverted)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Key, UniPoly]]:
        return sorted(self.terms.items())

    @property
    def order(self) -> int:
        """Ambient order: largest total partial degree (0 for the zero element)."""
        return max((sum(b) for _, b in self.terms), default=0)

    @property
    def max_d_exponent(self) -> int:
        return max((max(b, default=0) for _, b in self.terms), default=0)

    @property
    def s_degree(self) -> int:
        return max((c.degree for c in self.terms.values()), default=0)

    def degrees(self) -> set[int]:
        """Set of |a| - |b| over the terms (total-degree grading)."""
        return {sum(a) - sum(b) for a, b in self.terms}

    def is_laurent(self) -> bool:
        return any(e < 0 for a, _ in self.terms for e in a)

    def is_multiplication(self) -> bool:
        return all(not any(b) for _, b in self.terms)

    def has_constant_coefficients(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def declare_localization(self, f: Sequence[int]) -> "WeylElement":
        return WeylElement._raw(self.nvars, self.terms, _merge_inverted(self.inverted, tuple(f)))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "WeylElement") -> None:
        if self.nvars != other.nvars:
            raise AmbientMismatch(f"ambient counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = WeylElement.scalar(self.nvars, other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(k, None)
            else:
                out[k] = v
        return WeylElement._raw(self.nvars, out, _merge_inverted(self.inverted, other.inverted))

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.nvars, {k: -c for k, c in self.terms.items()}, self.inverted)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = WeylElement.scalar(self.nvars, other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = UniPoly.coerce(c)
        if c.is_zero():
            return WeylElement._raw(self.nvars, {}, self.inverted)
        out = {}
        for k, v in self.terms.items():
            w = v * c
            if not w.is_zero():
                out[k] = w
        return WeylElement._raw(self.nvars, out, self.inverted)

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return normalize_product(self, other)
        if isinstance(other, (int, Fraction, UniPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of an operator")
        out = WeylElement.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = WeylElement.scalar(self.nvars, other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"WeylElement({self.to_text()})"

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form: lex-sorted terms, explicit coefficients."""
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "(0)"
        parts = []
        for (a, b), c in self.items():
            factors = [f"({c.to_text()})"]
            for i, e in enumerate(a):
                if e:
                    factors.append(names[i] if e == 1 else f"{names[i]}^{e}")
            for i, e in enumerate(b):
                if e:
                    factors.append("d" + names[i] if e == 1 else f"d{names[i]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def normalize_product(left: WeylElement, right: WeylElement) -> WeylElement:
    """Normal form of ``left`` composed with ``right``.

    Each variable is handled independently through
    d^b x^a = sum_k (b choose k)(a choose k) k! x^(a-k) d^(b-k),
    which stays finite for negative ``a`` because k <= b.
    """
    left._check(right)
    n = left.nvars
    inv = _merge_inverted(left.inverted, right.inverted)
    acc: dict[Key, UniPoly] = {}
    for (a, b), c in left.terms.items():
        for (a2, b2), c2 in right.terms.items():
            cc = c * c2
            expansions = [_swap(b[i], a2[i]) for i in range(n)]
            for combo in product(*expansions):
                coef = 1
                na = []
                nb = []
                for i, (k, ci) in enumerate(combo):
                    coef *= ci
                    na.append(a[i] + a2[i] - k)
                    nb.append(b[i] + b2[i] - k)
                key = (tuple(na), tuple(nb))
                term = cc * coef
                prev = acc.get(key)
                acc[key] = term if prev is None else prev + term
    out = {k: v for k, v in acc.items() if not v.is_zero()}
    for a, _ in out:
        _check_laurent(n, a, inv)
    return WeylElement._raw(n, out, inv)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return a * b - b * a


def bracket_power(delta: WeylElement, beta: WeylElement, n: int) -> WeylElement:
    """Iterated commutator [delta]^n_beta, with [delta]^0_beta = delta."""
    if n < 0:
        raise ValueError("bracket power must be nonnegative")
    out = delta
    for _ in range(n):
        if out.is_zero():
            break
        out = commutator(out, beta)
    return out


def iterated_bracket(delta: WeylElement, betas: Sequence[WeylElement],
                     powers: Sequence[int]) -> WeylElement:
    if len(betas) != len(powers):
        raise ValueError("betas and powers must have equal length")
    out = delta
    for beta, k in zip(betas, powers):
        out = bracket_power(out, beta, k)
    return out


# -- action on ring elements ----------------------------------------------

RingElement = dict  # Mono -> UniPoly


def apply(delta: WeylElement, monomial: Sequence[int], coeff=1,
          inverted: Optional[Sequence[int]] = None) -> RingElement:
    """Action of ``delta`` on ``coeff * x^monomial`` as {exponent: UniPoly}."""
    m = tuple(monomial)
    if len(m) != delta.nvars:
        raise AmbientMismatch("monomial length differs from ambient count")
    inv = _merge_inverted(delta.inverted, tuple(inverted) if inverted is not None else None)
    _check_laurent(delta.nvars, m, inv)
    coeff = UniPoly.coerce(coeff)
    out: RingElement = {}
    for (a, b), c in delta.terms.items():
        w = 1
        for mi, bi in zip(m, b):
            if bi:
                w *= falling(mi, bi)
                if not w:
                    break
        if not w:
            continue
        e = tuple(mi + ai - bi for mi, ai, bi in zip(m, a, b))
        _check_laurent(delta.nvars, e, inv)
        term = c * coeff * w
        prev = out.get(e)
        out[e] = term if prev is None else prev + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def act(delta: WeylElement, element: Mapping[Mono, object],
        inverted: Optional[Sequence[int]] = None) -> RingElement:
    """Action of ``delta`` on a ring element {exponent: coeff}."""
    out: RingElement = {}
    for m, c in element.items():
        for e, v in apply(delta, m, c, inverted).items():
            prev = out.get(e)
            out[e] = v if prev is None else prev + v
    return {k: v for k, v in out.items() if not v.is_zero()}


def substitute_s(delta: WeylElement, n: Scalar) -> WeylElement:
    out = {}
    for k, c in delta.terms.items():
        v = c(n)
        if v:
            out[k] = UniPoly.const(v)
    return WeylElement._raw(delta.nvars, out, delta.inverted)


# -- rearrangement identities -----------------------------------------------

def monomial_power(f: Sequence[int], t: int) -> WeylElement:
    """Multiplication by (x^f)^t; declares the localization when t < 0."""
    f = tuple(f)
    return WeylElement.monomial(len(f), tuple(t * e for e in f),
                                inverted=f if t < 0 else None)


def rearrange_right(delta: WeylElement, f: Sequence[int], t: int) -> WeylElement:
    """delta * f^t rewritten as sum_i (t choose i) f^(t-i) [delta]^i_f."""
    f = tuple(f)
    fm = WeylElement.monomial(len(f), f)
    out = WeylElement.zero(delta.nvars)
    br = delta
    for i in range(delta.order + 1):
        if br.is_zero():
            break
        out = out + monomial_power(f, t - i) * br * binom(t, i)
        br = commutator(br, fm)
    return out


def rearrange_left(delta: WeylElement, f: Sequence[int], t: int) -> WeylElement:
    """f^t * delta rewritten as sum_i (-1)^i (t choose i) [delta]^i_f f^(t-i)."""
    f = tuple(f)
    fm = WeylElement.monomial(len(f), f)
    out = WeylElement.zero(delta.nvars)
    br = delta
    for i in range(delta.order + 1):
        if br.is_zero():
            break
        out = out + br * monomial_power(f, t - i) * (binom(t, i) * (-1) ** i)
        br = commutator(br, fm)
    return out


def rearrange_general(deltas: Sequence[WeylElement], f: Sequence[int],
                      exponents: Sequence[int], side: str = "right") -> WeylElement:
    """Collect all powers of f in a product of operators and powers of f.

    ``side="right"`` rewrites d1 f^a1 d2 f^a2 ... dt f^at with every f-power
    moved to the left; ``side="left"`` rewrites f^a1 d1 ... f^at dt with every
    f-power moved to the right.  Brackets [d_j]^i_f are taken with the
    multiplication operator f.
    """
    if len(deltas) != len(exponents):
        raise ValueError("deltas and exponents must have equal length")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if not deltas:
        raise ValueError("need at least one operator")
    f = tuple(f)
    nvars = deltas[0].nvars
    fm = WeylElement.monomial(nvars, f)
    tables = []
    for d in deltas:
        row = [d]
        for _ in range(d.order):
            nxt = commutator(row[-1], fm)
            if nxt.is_zero():
                break
            row.append(nxt)
        tables.append(row)
    t = len(deltas)
    total_a = sum(exponents)
    out = WeylElement.zero(nvars).declare_localization(f)
    for idx in product(*(range(len(row)) for row in tables)):
        coef = Fraction(1)
        for j in range(t):
            if side == "right":
                top = sum(exponents[j:]) - sum(idx[j + 1:])
            else:
                top = sum(exponents[:j + 1]) - sum(idx[:j])
            coef *= binom(top, idx[j])
            if not coef:
                break
        if not coef:
            continue
        if side == "left" and sum(idx) % 2:
            coef = -coef
        body = WeylElement.one(nvars)
        for j, i in enumerate(idx):
            body = body * tables[j][i]
        fp = monomial_power(f, total_a - sum(idx))
        term = fp * body if side == "right" else body * fp
        out = out + term * coef
    return out
