"""Characteristic-p root detection through Frobenius-power membership.

Everything reduces to exponent combinatorics: for a monomial ring R the
ideal m^[p]R is generated by the p-th powers of the algebra generators, and
a monomial x^e of R lies in it iff e - p*g is an exponent of R for some
generator g.  Multiplication by f^v is R^p-linear, so testing f^v against a
test module A only needs A's R^p-module generators.  Operators of order at
most p - 1 are R^p-linear as well, which is why nothing operator-valued is
needed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Optional, Sequence

from .rings import RingDescriptor, semigroup_contains
from .scalars import UniPoly

Mono = tuple[int, ...]


class NuBoundExceeded(RuntimeError):
    """f^v * A stayed outside the Frobenius ideal up to the search bound."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    p: int
    descriptor: RingDescriptor

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


def in_R(desc: RingDescriptor, e: Sequence[int]) -> bool:
    e = tuple(e)
    if any(x < 0 for x in e):
        return False
    if desc.kind == "polynomial":
        return True
    if desc.kind == "veronese":
        return sum(e) % desc.d == 0
    if desc.kind == "segre":
        return sum(e[:desc.a]) == sum(e[desc.a:])
    return semigroup_contains(desc, e)


def in_frobenius_ideal(m: Sequence[int], ctx: PrimeContext) -> bool:
    """Whether x^m lies in m^[p] R."""
    m = tuple(m)
    desc = ctx.descriptor
    if not in_R(desc, m):
        raise ValueError(f"{m} is not an exponent of R")
    for g in desc.algebra_generators():
        if in_R(desc, tuple(mi - ctx.p * gi for mi, gi in zip(m, g))):
            return True
    return False


# -- test modules -------------------------------------------------------------

@dataclass(frozen=True)
class TestModule:
    generators: tuple[Mono, ...]
    label: str = ""

    __test__ = False  # not a pytest class


def _monomials_of_degree(n: int, deg: int) -> list[Mono]:
    out = []
    for combo in combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _box(n: int, p: int, total: int) -> list[Mono]:
    """Tuples in [0, p)^n with entry sum ``total``."""
    if total < 0 or total > n * (p - 1):
        return []
    return [t for t in product(range(p), repeat=n) if sum(t) == total]


def build_test_module(descriptor: RingDescriptor, ctx: PrimeContext, spec) -> TestModule:
    """R^p-generators of a test module.

    ``spec`` is ``"veronese-odd"``, ``("segre-a", i)``, ``("segre-b", j)`` or
    ``("explicit", monomials)``; strings like ``"segre-a:1"`` are accepted too.
    """
    kind, arg = _parse_spec(spec)
    p = ctx.p
    gens: set[Mono] = set()
    if kind == "explicit":
        gens = {tuple(m) for m in arg}
    elif kind == "veronese-odd":
        if descriptor.kind != "veronese" or descriptor.d != 2 or descriptor.nvars != 2:
            raise ValueError("veronese-odd needs the degree-2 Veronese in two variables")
        for a, b in product(range(p), repeat=2):
            if (a + b) % 2:
                for g in ((1, 0), (0, 1)):
                    gens.add((a + p * g[0], b + p * g[1]))
    elif kind in ("segre-a", "segre-b"):
        if descriptor.kind != "segre":
            raise ValueError(f"{kind} needs a Segre descriptor")
        na, nb = descriptor.a, descriptor.b
        i = arg
        if i < 1:
            raise ValueError("module index must be positive")
        # A_i: |alpha| = |beta| + i p, twisted by y-monomials of degree i;
        # B_j mirrors this with x-monomials
        if kind == "segre-a":
            shifts = [(0,) * na + g for g in _monomials_of_degree(nb, i)]
        else:
            shifts = [g + (0,) * nb for g in _monomials_of_degree(na, i)]
        sign = 1 if kind == "segre-a" else -1
        for beta_total in range(nb * (p - 1) + 1):
            alpha_total = beta_total + sign * i * p
            alphas = _box(na, p, alpha_total)
            if not alphas:
                continue
            for alpha in alphas:
                for beta in _box(nb, p, beta_total):
                    base = alpha + beta
                    for g in shifts:
                        gens.add(tuple(x + p * y for x, y in zip(base, g)))
    else:
        raise ValueError(f"unknown test module {spec!r}")
    for g in gens:
        if not in_R(descriptor, g):
            raise ValueError(f"test module generator {g} is not in R")
    label = kind if arg is None or kind == "explicit" else f"{kind}:{arg}"
    return TestModule(tuple(sorted(gens)), label)


def _parse_spec(spec):
    if isinstance(spec, str):
        if ":" in spec:
            kind, arg = spec.split(":", 1)
            return kind.strip(), int(arg)
        return spec.strip(), None
    if isinstance(spec, tuple) and spec:
        return spec[0], spec[1] if len(spec) > 1 else None
    raise ValueError(f"bad test module spec {spec!r}")


# -- nu -----------------------------------------------------------------------

@dataclass
class NuValue:
    p: int
    nu: int
    witness: Optional[Mono]  # generator attaining nu, if nu >= 0


def nu_for_generator(f: Mono, m: Mono, ctx: PrimeContext, v_max: int) -> int:
    """Largest v <= v_max with f^v m outside the Frobenius ideal, or -1."""
    v = -1
    e = m
    while not in_frobenius_ideal(e, ctx):
        v += 1
        if v == v_max:
            raise NuBoundExceeded(f"f^{v_max} * {m} is still outside the ideal")
        e = tuple(a + b for a, b in zip(e, f))
    return v


def nu_invariant(f: Sequence[int], module: TestModule, ctx: PrimeContext,
                 v_max: Optional[int] = None) -> NuValue:
    f = tuple(f)
    if not in_R(ctx.descriptor, f):
        raise ValueError("f is not in R")
    if v_max is None:
        v_max = 4 * ctx.p + 4
    best, witness = -1, None
    for m in module.generators:
        v = nu_for_generator(f, m, ctx, v_max)
        if v > best:
            best, witness = v, m
    return NuValue(ctx.p, best, witness)


# -- fitting ------------------------------------------------------------------

@dataclass
class NuResult:
    per_prime: list[tuple[int, int]]
    fitted: Optional[UniPoly]
    predicted_root: Optional[Fraction]
    polynomial: bool = True
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "perPrime": [{"p": p, "nu": v} for p, v in self.per_prime],
            "fitted": self.fitted.to_text() if self.fitted is not None else None,
            "predictedRoot": str(self.predicted_root) if self.predicted_root is not None else None,
            "polynomial": self.polynomial,
            "witnesses": {str(p): list(w) if w else None for p, w in self.witnesses.items()},
        }


def interpolate(points: Sequence[tuple[int, int]]) -> UniPoly:
    """Lagrange interpolation over Q."""
    out = UniPoly()
    for i, (xi, yi) in enumerate(points):
        term = UniPoly.const(yi)
        for j, (xj, _) in enumerate(points):
            if j != i:
                term = term * UniPoly((Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        out = out + term
    return out


def fit_r_and_predict(points: Sequence[tuple[int, int]], degree: int = 1) -> NuResult:
    points = list(points)
    if len({p for p, _ in points}) != len(points):
        raise ValueError("repeated prime in the data")
    if len(points) < degree + 1:
        raise ValueError(f"need at least {degree + 1} points")
    r = interpolate(points[:degree + 1])
    ok = all(r(p) == v for p, v in points[degree + 1:])
    if not ok:
        return NuResult(points, None, None, False)
    return NuResult(points, r, r(0), True)


def nu_sweep(descriptor: RingDescriptor, f: Sequence[int], module_spec, primes: Sequence[int],
             degree: int = 1, v_max: Optional[int] = None) -> NuResult:
    """nu_p for each prime, then the fitted r(p) and r(0)."""
    pts, wit = [], {}
    for p in primes:
        ctx = PrimeContext(p, descriptor)
        mod = build_test_module(descriptor, ctx, module_spec)
        res = nu_invariant(f, mod, ctx, v_max)
        pts.append((p, res.nu))
        wit[p] = res.witness
    out = fit_r_and_predict(pts, degree)
    out.witnesses = wit
    return out
