"""Monomial subrings R of a polynomial ring S and operators acting on them.

Supported descriptors: the polynomial ring itself, Veronese subrings S^(d),
Segre rings K[x_i y_j], and affine semigroup rings given by generators.

Equality of operators *on R* is decided by their action on a finite set of
R-monomials.  Why a finite set suffices: write delta = sum c_ab x^a d^b and
group the terms by the shift v = a - b.  Then

    delta(x^m) = sum_v P_v(m) x^(m+v),   P_v(m) = sum_{a-b=v} c_ab prod_i m_i^(b_i)_falling,

so delta vanishes on R iff every P_v vanishes on the semigroup of R.  P_v has
degree <= max_i b_i in each variable and total degree <= ord(delta).  The grid
bound B = (max partial exponent) + (order) + 1 contains a set on which such a
polynomial is determined by its values:

* polynomial ring: the box [0, maxb]^n (tensor-product interpolation);
* Veronese(d): fix m_2..m_n in [0, maxb]; the admissible m_1 <= B form a
  residue class with at least floor((B+1)/d) >= maxb+1 members once
  B >= d(maxb+1) - 1 (automatic for d <= 2; enforced for larger d);
* Segre(a, b): the map (t, alpha_2.., beta_2..) -> (t + |beta_>=2|, alpha_2..,
  t + |alpha_>=2|, beta_2..) is a linear bijection onto the hyperplane
  |alpha| = |beta|; the simplex of size ord(delta) maps into [0, ord]^(a+b),
  and a total-degree-D polynomial vanishing on that simplex is zero, hence
  P_v vanishes on the whole hyperplane (this is the Euler relation);
* general semigroups: a box c + [0, maxb]^n inside the semigroup is searched
  for and B is enlarged to cover it; semigroups without such a box (not of
  full rank) fall back to the plain bound and are reported as uncertified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import lcm, perm
from typing import Optional, Sequence

from .scalars import UniPoly
from .weyl import Mono, WeylElement, apply, commutator

KINDS = ("polynomial", "veronese", "segre", "semigroup")


class GridError(ValueError):
    pass


class OrderBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    names: tuple[str, ...]
    d: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    generators: Optional[tuple[Mono, ...]] = None
    weights: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        n = len(self.names)
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * n)
        if len(self.weights) != n or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        if self.kind == "veronese" and (self.d is None or self.d < 1):
            raise ValueError("Veronese degree must be >= 1")
        if self.kind == "segre":
            if self.a is None or self.b is None or self.a < 2 or self.b < 2:
                raise ValueError("Segre needs a, b >= 2")
            if n != self.a + self.b:
                raise ValueError("Segre ring needs a + b variable names")
        if self.kind == "semigroup":
            if not self.generators:
                raise ValueError("semigroup ring needs generators")
            gens = tuple(tuple(g) for g in self.generators)
            for g in gens:
                if len(g) != n or any(e < 0 for e in g):
                    raise ValueError(f"bad semigroup generator {g}")
            object.__setattr__(self, "generators", gens)

    # -- constructors ------------------------------------------------------
    @classmethod
    def polynomial(cls, names: Sequence[str] | int = ("x", "y")) -> "RingDescriptor":
        if isinstance(names, int):
            names = [f"x{i + 1}" for i in range(names)]
        return cls("polynomial", tuple(names))

    @classmethod
    def veronese(cls, d: int, names: Sequence[str] | int = ("x", "y")) -> "RingDescriptor":
        if isinstance(names, int):
            names = [f"x{i + 1}" for i in range(names)]
        return cls("veronese", tuple(names), d=d)

    @classmethod
    def segre(cls, a: int, b: int) -> "RingDescriptor":
        names = tuple(f"x{i + 1}" for i in range(a)) + tuple(f"y{j + 1}" for j in range(b))
        return cls("segre", names, a=a, b=b)

    @classmethod
    def semigroup(cls, generators: Sequence[Sequence[int]],
                  names: Sequence[str] = ("x", "y")) -> "RingDescriptor":
        return cls("semigroup", tuple(names), generators=tuple(tuple(g) for g in generators))

    # -- basic data --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def degree(self, m: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    def algebra_generators(self) -> list[Mono]:
        """Monomial K-algebra generators of R (as exponent vectors)."""
        n = self.nvars
        if self.kind == "polynomial":
            return [tuple(int(i == j) for j in range(n)) for i in range(n)]
        if self.kind == "veronese":
            out = []
            for combo in combinations_with_replacement(range(n), self.d):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                out.append(tuple(e))
            return sorted(set(out), reverse=True)
        if self.kind == "segre":
            out = []
            for i in range(self.a):
                for j in range(self.b):
                    e = [0] * n
                    e[i] = 1
                    e[self.a + j] = 1
                    out.append(tuple(e))
            return out
        return [g for g in self.generators if any(g)]

    def krull_dim(self) -> int:
        if self.kind in ("polynomial", "veronese"):
            return self.nvars
        if self.kind == "segre":
            return self.a + self.b - 1
        from .linalg import rank

        return rank([list(g) for g in self.algebra_generators()])

    def max_generator_degree(self) -> int:
        return max(self.degree(g) for g in self.algebra_generators())

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "vars": list(self.names)}
        if self.kind == "veronese":
            out["d"] = self.d
        if self.kind == "segre":
            out["a"], out["b"] = self.a, self.b
        if self.kind == "semigroup":
            out["generators"] = [list(g) for g in self.generators]
        if any(w != 1 for w in self.weights):
            out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RingDescriptor":
        kind = data["kind"]
        weights = tuple(data.get("weights", ()))
        if kind == "segre":
            a, b = int(data["a"]), int(data["b"])
            base = cls.segre(a, b)
            return cls("segre", base.names, a=a, b=b, weights=weights)
        names = tuple(data.get("vars", ("x", "y")))
        if kind == "polynomial":
            return cls("polynomial", names, weights=weights)
        if kind == "veronese":
            return cls("veronese", names, d=int(data["d"]), weights=weights)
        if kind == "semigroup":
            return cls("semigroup", names, generators=tuple(tuple(g) for g in data["generators"]),
                       weights=weights)
        raise ValueError(f"unknown ring kind {kind!r}")

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def parse(cls, text: str) -> "RingDescriptor":
        """Parse JSON or the short forms

        ``polynomial:x,y`` | ``veronese:2:x,y`` | ``segre:2,3`` |
        ``semigroup:x,y:x^2,x^3,y,x*y``
        """
        text = text.strip()
        if text.startswith("{"):
            return cls.from_dict(json.loads(text))
        parts = text.split(":")
        kind = parts[0].strip().lower()
        if kind == "polynomial":
            names = _names(parts[1]) if len(parts) > 1 else ("x", "y")
            return cls.polynomial(names)
        if kind == "veronese":
            if len(parts) < 2:
                raise ValueError("veronese needs a degree, e.g. veronese:2:x,y")
            names = _names(parts[2]) if len(parts) > 2 else ("x", "y")
            return cls.veronese(int(parts[1]), names)
        if kind == "segre":
            if len(parts) < 2:
                raise ValueError("segre needs sizes, e.g. segre:2,3")
            a, b = (int(v) for v in parts[1].split(","))
            return cls.segre(a, b)
        if kind == "semigroup":
            if len(parts) < 3:
                raise ValueError("semigroup needs vars and generators")
            names = _names(parts[1])
            gens = [_parse_monomial(g, names) for g in parts[2].split(",")]
            return cls.semigroup(gens, names)
        raise ValueError(f"unknown ring kind {kind!r}")


def _names(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _parse_monomial(text: str, names: Sequence[str]) -> Mono:
    e = [0] * len(names)
    text = text.strip()
    if text == "1":
        return tuple(e)
    for factor in text.split("*"):
        base, _, power = factor.partition("^")
        e[list(names).index(base.strip())] += int(power) if power else 1
    return tuple(e)


# -- semigroup membership -----------------------------------------------------

@lru_cache(maxsize=None)
def _generic_member(gens: tuple[Mono, ...], e: Mono) -> bool:
    if not any(e):
        return True
    for g in gens:
        rest = tuple(x - y for x, y in zip(e, g))
        if min(rest) >= 0 and _generic_member(gens, rest):
            return True
    return False


def semigroup_contains(desc: RingDescriptor, e: Sequence[int]) -> bool:
    e = tuple(e)
    if len(e) != desc.nvars:
        raise ValueError("exponent vector has wrong length")
    if any(v < 0 for v in e):
        raise ValueError("negative exponent in semigroup membership query")
    if desc.kind == "polynomial":
        return True
    if desc.kind == "veronese":
        return sum(e) % desc.d == 0
    if desc.kind == "segre":
        return sum(e[: desc.a]) == sum(e[desc.a:])
    gens = tuple(g for g in desc.generators if any(g))
    return _generic_member(gens, e)


def _in_semigroup(desc: RingDescriptor, e: Mono) -> bool:
    return min(e, default=0) >= 0 and semigroup_contains(desc, e)


def element_in_R(desc: RingDescriptor, element: dict) -> bool:
    return all(_in_semigroup(desc, m) for m in element)


# -- test grids -------------------------------------------------------------

@lru_cache(maxsize=256)
def sample_grid(desc: RingDescriptor, bound: int) -> tuple[Mono, ...]:
    """All semigroup points with every coordinate <= bound, lex sorted."""
    n = desc.nvars
    if desc.kind == "segre":
        xs = list(product(range(bound + 1), repeat=desc.a))
        by_sum: dict[int, list] = {}
        for ys in product(range(bound + 1), repeat=desc.b):
            by_sum.setdefault(sum(ys), []).append(ys)
        pts = [x + y for x in xs for y in by_sum.get(sum(x), ())]
    else:
        pts = [m for m in product(range(bound + 1), repeat=n) if semigroup_contains(desc, m)]
    if not pts:
        raise GridError("empty test grid")
    return tuple(sorted(pts))


def _conductor_box(desc: RingDescriptor, width: int) -> Optional[int]:
    """Smallest max-coordinate of a corner c with c + [0,width]^n inside R."""
    n = desc.nvars
    limit = 2 * max(max(g) for g in desc.algebra_generators()) + 2
    best = None
    for c in product(range(limit + 1), repeat=n):
        if best is not None and max(c) >= best:
            continue
        if all(semigroup_contains(desc, tuple(ci + di for ci, di in zip(c, dd)))
               for dd in product(range(width + 1), repeat=n)):
            best = max(c)
    return best


def grid_bound(desc: RingDescriptor, delta: WeylElement) -> tuple[int, bool]:
    """Test-grid bound for ``delta`` and whether it is certified sufficient."""
    maxb = delta.max_d_exponent
    bound = maxb + delta.order + 1
    if desc.kind == "veronese" and desc.d > 2:
        bound = max(bound, desc.d * (maxb + 1) - 1)
    if desc.kind == "semigroup":
        corner = _conductor_box(desc, maxb)
        if corner is None:
            return bound, False
        bound = max(bound, corner + maxb)
    return bound, True


# -- action tests -------------------------------------------------------------

def _integer_groups(delta: WeylElement) -> dict[Mono, list[tuple[Mono, int]]]:
    if not delta.has_constant_coefficients():
        raise ValueError("operator has s-dependent coefficients; substitute s first")
    den = lcm(1, *(c.constant_value().denominator for c in delta.terms.values()))
    groups: dict[Mono, list] = {}
    for (a, b), c in delta.terms.items():
        v = tuple(x - y for x, y in zip(a, b))
        groups.setdefault(v, []).append((b, int(c.constant_value() * den)))
    return groups


def nonzero_witness(delta: WeylElement, desc: RingDescriptor,
                    extra: int = 0) -> Optional[tuple[Mono, dict]]:
    """First grid monomial m (lex order) with delta(x^m) != 0, with the image."""
    if delta.nvars != desc.nvars:
        raise ValueError("operator and ring have different ambient counts")
    if delta.is_laurent():
        raise ValueError("Laurent operator; the zero test needs an operator on S")
    if delta.is_zero():
        return None
    groups = _integer_groups(delta)
    bound, _ = grid_bound(desc, delta)
    items = list(groups.items())
    for m in sample_grid(desc, bound + extra):
        for v, terms in items:
            total = 0
            for b, c in terms:
                w = c
                for mi, bi in zip(m, b):
                    if bi:
                        w *= perm(mi, bi)
                        if not w:
                            break
                total += w
            if total:
                return m, apply(delta, m)
    return None


def acts_as_zero_on_R(delta: WeylElement, desc: RingDescriptor, extra: int = 0) -> bool:
    return nonzero_witness(delta, desc, extra) is None


def operators_equal_on_R(a: WeylElement, b: WeylElement, desc: RingDescriptor) -> bool:
    return acts_as_zero_on_R(a - b, desc)


def contains_operator(desc: RingDescriptor, delta: WeylElement) -> bool:
    """Whether delta maps R into R (term-wise criterion where one is known)."""
    if delta.is_laurent():
        raise ValueError("Laurent operator is not an operator on S")
    if desc.kind == "polynomial":
        return True
    if desc.kind == "veronese":
        return all((sum(a) - sum(b)) % desc.d == 0 for a, b in delta.terms)
    if desc.kind == "segre":
        k = desc.a
        return all(sum(a[:k]) - sum(b[:k]) == sum(a[k:]) - sum(b[k:]) for a, b in delta.terms)
    bound, _ = grid_bound(desc, delta)
    for m in sample_grid(desc, bound):
        for e in apply(delta, m):
            if not _in_semigroup(desc, e):
                return False
    return True


def order_on_R(delta: WeylElement, desc: RingDescriptor, max_order: int = 8) -> int:
    """Order of delta as an operator on R, via brackets with algebra generators.

    Returns the number of bracket rounds that stay nonzero on R.  The zero
    operator has order 0.
    """
    gens = [WeylElement.monomial(desc.nvars, g) for g in desc.algebra_generators()]
    level = [] if acts_as_zero_on_R(delta, desc) else [delta]
    order = 0
    while level:
        nxt = set()
        for e in level:
            for g in gens:
                c = commutator(e, g)
                if not c.is_zero() and not acts_as_zero_on_R(c, desc):
                    nxt.add(c)
        if not nxt:
            return order
        order += 1
        if order > max_order:
            raise OrderBoundExceeded(f"order exceeds {max_order}")
        level = sorted(nxt, key=lambda w: w.to_text())
    return order
