"""Bernstein filtration counts, Dim/e estimates and differential powers.

Operators are counted through the monomial basis x^a d^b of the ambient
Weyl algebra restricted to those preserving R.  The level of x^a d^b is
(|a| - |b|) + w |b|, its degree plus w times its order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from .rings import RingDescriptor
from .weyl import WeylElement, apply

Mono = tuple[int, ...]


def _n_monomials(nvars: int, degree: int) -> int:
    return comb(degree + nvars - 1, nvars - 1) if degree >= 0 else 0


def bernstein_count(desc: RingDescriptor, w: int, i: int, b_zero: bool = False) -> int:
    """dim of level i of the slope-w Bernstein filtration (monomial basis count).

    Exact for polynomial and Veronese rings.  For Segre rings the count is
    of ambient operators preserving R, an upper bound (see ``is_upper_bound``).
    ``b_zero`` restricts to the order-zero slice.
    """
    if w <= desc.max_generator_degree():
        raise ValueError("slope must exceed the largest generator degree")
    if i < 0:
        return 0
    n = desc.nvars
    total = 0
    if desc.kind in ("polynomial", "veronese"):
        d = desc.d if desc.kind == "veronese" else 1
        bmax = 0 if b_zero else i // (w - 1)
        for B in range(bmax + 1):
            nb = _n_monomials(n, B)
            for A in range(i - (w - 1) * B + 1):
                if (A - B) % d == 0:
                    total += _n_monomials(n, A) * nb
        return total
    if desc.kind == "segre":
        na, nb = desc.a, desc.b
        bmax = 0 if b_zero else i // (w - 1)
        # |a_x| - |b_x| = |a_y| - |b_y| = k; level = 2k + w (Bx + By)
        for bx in range(bmax + 1):
            for by in range(bmax - bx + 1):
                cb = _n_monomials(na, bx) * _n_monomials(nb, by)
                B = bx + by
                k = -min(bx, by)
                while True:
                    A = 2 * k + B  # |a| = |a_x| + |a_y|
                    if A + (w - 1) * B > i:
                        break
                    total += _n_monomials(na, bx + k) * _n_monomials(nb, by + k) * cb
                    k += 1
        return total
    raise ValueError(f"bernstein_count does not support {desc.kind} rings")


def is_upper_bound(desc: RingDescriptor) -> bool:
    return desc.kind == "segre"


def r_monomial_count(desc: RingDescriptor, i: int) -> int:
    """Number of R-monomials of ambient degree <= i, by enumeration."""
    from .charp import in_R

    n = desc.nvars
    count = 0
    for e in product(range(i + 1), repeat=n):
        if sum(e) <= i and in_R(desc, e):
            count += 1
    return count


@dataclass
class FiltrationStats:
    w: int
    counts: list[tuple[int, int]]
    fitted_dim: Optional[float] = None
    fitted_e: Optional[float] = None
    upper_bound: bool = False

    def to_dict(self) -> dict:
        return {"w": self.w, "counts": [{"i": i, "dim": c} for i, c in self.counts],
                "dimEstimate": self.fitted_dim, "eEstimate": self.fitted_e,
                "upperBound": self.upper_bound}

    def to_csv(self) -> str:
        return "i,dim\n" + "".join(f"{i},{c}\n" for i, c in self.counts)


def estimate_dim_e(counts: Sequence[tuple[int, int]]) -> tuple[float, float]:
    """Log-log slope over the top half of the levels, and d! count / i^d at the top."""
    pts = [(i, c) for i, c in counts if i > 0 and c > 0]
    if len(pts) < 4:
        raise ValueError("too few levels to estimate a growth exponent")
    top = pts[len(pts) // 2:]
    xs = np.log([i for i, _ in top])
    ys = np.log([c for _, c in top])
    slope = float(np.polyfit(xs, ys, 1)[0])
    i_max, c_max = pts[-1]
    d = int(round(slope))
    e = factorial(d) * c_max / i_max ** d
    return slope, e


def filtration_stats(desc: RingDescriptor, w: int, i_max: int) -> FiltrationStats:
    counts = [(i, bernstein_count(desc, w, i)) for i in range(i_max + 1)]
    dim, e = estimate_dim_e(counts)
    return FiltrationStats(w, counts, dim, e, is_upper_bound(desc))


# -- differential powers ------------------------------------------------------

def _admissible(desc: RingDescriptor, a: Mono, b: Mono) -> bool:
    if desc.kind == "polynomial":
        return True
    if desc.kind == "veronese":
        return (sum(a) - sum(b)) % desc.d == 0
    if desc.kind == "segre":
        k = desc.a
        return sum(a[:k]) - sum(b[:k]) == sum(a[k:]) - sum(b[k:])
    raise ValueError(f"differential powers are not supported for {desc.kind} rings")


def default_search_bound(desc: RingDescriptor) -> int:
    if desc.kind == "veronese":
        return desc.d
    if desc.kind == "segre":
        return max(desc.a, desc.b)
    return 1


def diff_power_membership(m: Sequence[int], n: int, desc: RingDescriptor,
                          search_bound: Optional[int] = None) -> bool:
    """Whether x^m lies in the n-th differential power of the homogeneous maximal ideal.

    x^m is outside exactly when some operator of order <= n - 1 sends it to a
    nonzero constant.  Only x^a d^(m+a) can do so, and d^(m+a) kills x^m unless
    a = 0; the search over |a| <= search_bound is kept as a guard.  Orders are
    ambient orders; for Segre rings the order on R can be smaller.
    """
    m = tuple(m)
    if n <= 0:
        return True  # the 0-th power is R itself
    if search_bound is None:
        search_bound = default_search_bound(desc)
    nv = desc.nvars
    zero = (0,) * nv
    for a in product(range(search_bound + 1), repeat=nv):
        if sum(a) > search_bound:
            continue
        b = tuple(x + y for x, y in zip(m, a))
        if sum(b) > n - 1 or not _admissible(desc, a, b):
            continue
        image = apply(WeylElement.monomial(nv, a, b), m)
        if image.get(zero) is not None and not image[zero].is_zero():
            return False
    return True


@dataclass
class DiffPowerTable:
    entries: list[tuple[int, int]]
    signature_estimate: Fraction
    dim: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"entries": [{"n": n, "colength": c} for n, c in self.entries],
                "signatureEstimate": str(self.signature_estimate),
                "signatureFloat": float(self.signature_estimate), "dim": self.dim,
                "notes": self.notes}

    def to_csv(self) -> str:
        return "n,colength\n" + "".join(f"{n},{c}\n" for n, c in self.entries)


def _r_monomials_upto(desc: RingDescriptor, degree: int) -> list[Mono]:
    from .charp import in_R

    return [e for e in product(range(degree + 1), repeat=desc.nvars)
            if sum(e) <= degree and in_R(desc, e)]


def differential_signature_estimate(desc: RingDescriptor, n_max: int) -> DiffPowerTable:
    """Colengths dim R / m^<n> for n = 0..n_max and (dim R)! / n^dim * colength at n_max.

    Monomials of ambient degree >= n are always inside m^<n>, so the
    enumeration stops at degree n - 1.
    """
    if desc.kind not in ("polynomial", "veronese", "segre"):
        raise ValueError(f"differential powers are not supported for {desc.kind} rings")
    mons = _r_monomials_upto(desc, max(n_max - 1, 0))
    entries = []
    for n in range(n_max + 1):
        col = sum(1 for m in mons if sum(m) <= n - 1 and not diff_power_membership(m, n, desc))
        entries.append((n, col))
    d = desc.krull_dim()
    sig = Fraction(factorial(d) * entries[-1][1], n_max ** d) if n_max > 0 else Fraction(0)
    notes = ["ambient orders used; an upper bound on colengths"] if desc.kind == "segre" else []
    return DiffPowerTable(entries, sig, d, notes)
