"""Sparse commutative polynomials over Q and bounded ideal-membership search."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Optional, Sequence

from .linalg import SparseSolver

Mono = tuple[int, ...]


class CPoly:
    """Polynomial in the named commuting variables ``names``."""

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Mono, object] | None = None):
        self.names = tuple(names)
        self.terms: dict[Mono, Fraction] = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(m)] = c

    @classmethod
    def const(cls, names, c) -> "CPoly":
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def var(cls, names, name: str) -> "CPoly":
        names = tuple(names)
        return cls(names, {tuple(int(n == name) for n in names): 1})

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "CPoly":
        """Read a polynomial written in the operator DSL syntax."""
        from . import dsl

        return _from_ast(dsl.parse(text), tuple(names))

    def _lift(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            if other.names != self.names:
                raise ValueError("polynomials live in different rings")
            return other
        return CPoly.const(self.names, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return CPoly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return CPoly(self.names, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return CPoly(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CPoly.const(self.names, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly.const(self.names, other)
        return self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        acc = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for name, e in zip(self.names, m):
                if e:
                    v *= Fraction(point[name]) ** e
            acc += v
        return acc

    def __repr__(self):
        return f"CPoly({self.to_text()})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e]
            parts.append("*".join([f"({c})"] + factors))
        return " + ".join(parts)


def _from_ast(node, names: tuple[str, ...]) -> CPoly:
    from . import dsl

    if isinstance(node, dsl.ScalarPoly):
        if "s" in names:
            s = CPoly.var(names, "s")
            out = CPoly(names)
            for k, c in enumerate(node.poly.coeffs):
                out = out + s ** k * c
            return out
        if not node.poly.is_constant():
            raise ValueError("'s' is not one of the ring variables")
        return CPoly.const(names, node.poly.constant_value())
    if isinstance(node, dsl.Var):
        if node.name not in names:
            raise ValueError(f"unknown variable {node.name!r}")
        return CPoly.var(names, node.name)
    if isinstance(node, dsl.Sum):
        out = CPoly(names)
        for t in node.terms:
            out = out + _from_ast(t, names)
        return out
    if isinstance(node, dsl.Product):
        out = CPoly.const(names, 1)
        for t in node.factors:
            out = out * _from_ast(t, names)
        return out
    if isinstance(node, dsl.Power):
        if node.exponent < 0:
            raise ValueError("negative power in a commutative polynomial")
        return _from_ast(node.base, names) ** node.exponent
    raise ValueError(f"unsupported node in a commutative polynomial: {node!r}")


def monomials_up_to(nvars: int, degree: int) -> list[Mono]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def find_poly_combination(target: CPoly, generators: Sequence[CPoly],
                          degree_bound: int) -> Optional[list[CPoly]]:
    """Coefficients c_i of total degree <= degree_bound with sum g_i c_i = target.

    Solved exactly as a linear system in the coefficients of the c_i; free
    unknowns are set to zero.  Returns None when no such combination exists.
    """
    names = target.names
    basis = monomials_up_to(len(names), degree_bound)
    nb = len(basis)
    # equation per output monomial: sum_{i,mu} g_i[m - mu] * c_{i,mu} = target[m]
    rows: dict[Mono, dict[int, Fraction]] = {}
    for i, g in enumerate(generators):
        for j, mu in enumerate(basis):
            col = i * nb + j
            for m, c in g.terms.items():
                key = tuple(a + b for a, b in zip(m, mu))
                rows.setdefault(key, {})[col] = c
    solver = SparseSolver()
    for key in sorted(set(rows) | set(target.terms)):
        solver.add_row(rows.get(key, {}), target.terms.get(key, 0))
        if not solver.consistent:
            return None
    x = solver.solution(len(generators) * nb)
    if x is None:
        return None
    coeffs = []
    for i in range(len(generators)):
        coeffs.append(CPoly(names, {basis[j]: x[i * nb + j] for j in range(nb)}))
    return coeffs
