"""Sandwich Bernstein-Sato equations: verification, collapse, Theta and search.

An equation  sum_i alpha_i(s) f^(s+1) beta_i(s) = b(s) f^s  is checked at
integer samples s = n.  Every normal-form coefficient of

    Delta(n) = sum_i alpha_i(n) f^(n+1) beta_i(n) - b(n) f^n

is a polynomial in n: the s-coefficients contribute their degree, and moving
f^(n+1) past an operator of order r produces binomials (n+1 choose i) with
i <= r.  So Delta(n) acting on a fixed x^m is a polynomial in n of degree at
most (total s-degree) + (max order), and vanishing at N + 1 consecutive
integers with N = that bound + 2 forces it to vanish identically.  Each
Delta(n) is tested on R through the certified action grid of ``rings``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .linalg import SparseSolver
from .rings import (RingDescriptor, contains_operator, element_in_R, grid_bound,
                    nonzero_witness, sample_grid)
from .scalars import UniPoly
from .weyl import (Mono, WeylElement, act, apply, commutator, substitute_s)

Triple = tuple[WeylElement, int, WeylElement]  # alpha * f^(s+k) * beta


# -- data types -------------------------------------------------------------

def _as_f(f, nvars: int) -> WeylElement:
    """Accept an exponent tuple, a ring element dict or a multiplication operator."""
    if isinstance(f, WeylElement):
        if not f.is_multiplication():
            raise ValueError("f must be a multiplication operator")
        return f
    if isinstance(f, dict):
        return WeylElement.mult(f, nvars)
    return WeylElement.monomial(nvars, tuple(f))


def f_element(f: WeylElement) -> dict:
    """f as a ring element {exponent: coefficient}."""
    return {a: c for (a, _), c in f.terms.items()}


def f_monomial(f: WeylElement) -> Optional[Mono]:
    """Exponent of f when f is a monic monomial, else None."""
    if len(f.terms) != 1:
        return None
    (a, _), c = next(iter(f.terms.items()))
    return a if c == UniPoly.const(1) else None


def _f_power(f: WeylElement, k: int) -> WeylElement:
    mono = f_monomial(f)
    if mono is not None:
        return WeylElement.monomial(f.nvars, tuple(k * e for e in mono))
    return f ** k


@dataclass(frozen=True)
class SandwichEquation:
    descriptor: RingDescriptor
    f: WeylElement
    pairs: tuple[tuple[WeylElement, WeylElement], ...]
    b: UniPoly

    @classmethod
    def build(cls, descriptor, f, pairs, b) -> "SandwichEquation":
        f = _as_f(f, descriptor.nvars)
        return cls(descriptor, f, tuple((a, bt) for a, bt in pairs), UniPoly.coerce(b))

    def validate(self) -> None:
        if not element_in_R(self.descriptor, f_element(self.f)):
            raise ValueError("f is not an element of R")
        for alpha, beta in self.pairs:
            for op in (alpha, beta):
                if op.nvars != self.descriptor.nvars:
                    raise ValueError("operator and ring have different ambient counts")
                if not contains_operator(self.descriptor, op):
                    raise ValueError(f"operator {op.to_text(self.descriptor.names)} does not preserve R")

    def normalized(self) -> "SandwichEquation":
        """Same equation scaled so that b is monic."""
        if self.b.is_zero():
            return self
        c = 1 / self.b.lead()
        return SandwichEquation(self.descriptor, self.f,
                                tuple((a * c, bt) for a, bt in self.pairs), self.b.monic())

    def with_b(self, b) -> "SandwichEquation":
        return SandwichEquation(self.descriptor, self.f, self.pairs, UniPoly.coerce(b))

    def triples(self) -> list[Triple]:
        return [(a, 1, bt) for a, bt in self.pairs]

    def __add__(self, other: "SandwichEquation") -> "SandwichEquation":
        if (other.descriptor, other.f) != (self.descriptor, self.f):
            raise ValueError("equations for different rings or elements")
        return SandwichEquation(self.descriptor, self.f, self.pairs + other.pairs, self.b + other.b)

    def lscale(self, k: UniPoly) -> "SandwichEquation":
        """Multiply through by the polynomial k(s)."""
        k = UniPoly.coerce(k)
        one = WeylElement.one(self.descriptor.nvars)
        return SandwichEquation(self.descriptor, self.f,
                                tuple((one * k * a, bt) for a, bt in self.pairs), self.b * k)


@dataclass(frozen=True)
class BsEquation:
    descriptor: RingDescriptor
    f: WeylElement
    delta: WeylElement
    b: UniPoly

    @classmethod
    def build(cls, descriptor, f, delta, b) -> "BsEquation":
        return cls(descriptor, _as_f(f, descriptor.nvars), delta, UniPoly.coerce(b))

    def validate(self) -> None:
        if not element_in_R(self.descriptor, f_element(self.f)):
            raise ValueError("f is not an element of R")
        if not contains_operator(self.descriptor, self.delta):
            raise ValueError("delta does not preserve R")


@dataclass
class Failure:
    n: int
    witness: Mono
    lhs: dict
    rhs: dict

    def to_dict(self) -> dict:
        def fmt(el):
            return {",".join(map(str, k)): v.to_text() for k, v in sorted(el.items())}
        return {"n": self.n, "witness": list(self.witness), "lhs": fmt(self.lhs), "rhs": fmt(self.rhs)}


@dataclass
class VerificationReport:
    verdict: str
    sample_points: list[int]
    first_failure: Optional[Failure] = None
    sampling_bound: int = 0
    grid_bound: Optional[int] = None
    certified: bool = True
    label: str = ""
    parts: list["VerificationReport"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == "verified"

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "verdict": self.verdict,
            "samplePoints": self.sample_points,
            "samplingBound": self.sampling_bound,
            "gridBound": self.grid_bound,
            "certified": self.certified,
            "firstFailure": self.first_failure.to_dict() if self.first_failure else None,
        }
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


# -- verification -----------------------------------------------------------

def sampling_bound(triples: Sequence[Triple], extra_ops: Sequence[WeylElement] = ()) -> int:
    sdeg = sum(max(a.s_degree, 0) + max(b.s_degree, 0) for a, _, b in triples)
    sdeg += sum(max(op.s_degree, 0) for op in extra_ops)
    order = max([a.order + b.order for a, _, b in triples] + [op.order for op in extra_ops] + [0])
    return sdeg + order + 2


def _instantiate(triples: Sequence[Triple], f: WeylElement, n: int, nvars: int) -> WeylElement:
    out = WeylElement.zero(nvars)
    for a, k, b in triples:
        out = out + substitute_s(a, n) * _f_power(f, n + k) * substitute_s(b, n)
    return out


def verify_identity(descriptor: RingDescriptor, f, lhs: Sequence[Triple],
                    rhs: Sequence[Triple], extra_samples: int = 0,
                    label: str = "") -> VerificationReport:
    """Check sum(lhs) = sum(rhs) as operators on R, terms read as alpha f^(s+k) beta."""
    nvars = descriptor.nvars
    f = _as_f(f, nvars)
    triples = list(lhs) + list(rhs)
    N = sampling_bound(triples) + extra_samples
    n0 = max([0] + [-k for _, k, _ in triples])
    samples = list(range(n0, n0 + N + 1))
    worst, certified = 0, True
    for n in samples:
        left = _instantiate(lhs, f, n, nvars)
        right = _instantiate(rhs, f, n, nvars)
        diff = left - right
        bound, cert = grid_bound(descriptor, diff)
        worst, certified = max(worst, bound), certified and cert
        hit = nonzero_witness(diff, descriptor)
        if hit is not None:
            m = hit[0]
            fail = Failure(n, m, apply(left, m), apply(right, m))
            return VerificationReport("refuted", samples[:samples.index(n) + 1], fail,
                                      N, worst, certified, label)
    return VerificationReport("verified", samples, None, N, worst, certified, label)


def verify_sandwich(eq: SandwichEquation, extra_samples: int = 0,
                    label: str = "") -> VerificationReport:
    eq.validate()
    one = WeylElement.one(eq.descriptor.nvars)
    rhs = [(one * eq.b, 0, one)] if not eq.b.is_zero() else []
    return verify_identity(eq.descriptor, eq.f, eq.triples(), rhs, extra_samples, label)


def verify_bs(eq: BsEquation, extra_samples: int = 0, label: str = "") -> VerificationReport:
    """Check delta(n) . f^(n+1) = b(n) f^n as ring elements (action, not composition)."""
    eq.validate()
    N = eq.delta.s_degree + max(eq.b.degree, 0) + eq.delta.order + 2 + extra_samples
    samples = list(range(N + 1))
    power = {(0,) * eq.descriptor.nvars: UniPoly.const(1)}
    for n in samples:
        nxt = act(eq.f, power)
        lhs = act(substitute_s(eq.delta, n), nxt)
        bn = eq.b(n)
        rhs = {k: v * bn for k, v in power.items() if bn}
        if lhs != rhs:
            diff = set(k for k in set(lhs) | set(rhs) if lhs.get(k) != rhs.get(k))
            m = min(diff)
            fail = Failure(n, m, {m: lhs.get(m, UniPoly())}, {m: rhs.get(m, UniPoly())})
            return VerificationReport("refuted", samples[:n + 1], fail, N, None, True, label)
        power = nxt
    return VerificationReport("verified", samples, None, N, None, True, label)


def collapse_to_bs(eq: SandwichEquation) -> BsEquation:
    """delta(s) = sum alpha_i(s) composed with multiplication by beta_i(s)(1)."""
    nvars = eq.descriptor.nvars
    delta = WeylElement.zero(nvars)
    zero = (0,) * nvars
    for alpha, beta in eq.pairs:
        image = apply(beta, zero)
        if image:
            delta = delta + alpha * WeylElement.mult(image, nvars)
    return BsEquation(eq.descriptor, eq.f, delta, eq.b)


# -- Theta ------------------------------------------------------------------

def theta(delta: WeylElement, f, descriptor: Optional[RingDescriptor] = None) -> WeylElement:
    """Theta(delta) = sum_i (-1)^i (s choose i) [delta]^i_f f^(-i).

    Only monomial f is supported; the result lives in the localization at f.
    """
    if isinstance(f, WeylElement):
        mono = f_monomial(f)
        if mono is None:
            raise ValueError("theta needs a monic monomial f")
    elif isinstance(f, dict):
        if len(f) != 1 or list(f.values())[0] != 1:
            raise ValueError("theta needs a monic monomial f")
        mono = tuple(next(iter(f)))
    else:
        mono = tuple(f)
    if descriptor is not None and not element_in_R(descriptor, {mono: 1}):
        raise ValueError("f is not an element of R")
    nvars = delta.nvars
    fm = WeylElement.monomial(nvars, mono)
    out = WeylElement.zero(nvars).declare_localization(mono)
    br = delta
    for i in range(delta.order + 1):
        if br.is_zero():
            break
        inv = WeylElement.monomial(nvars, tuple(-i * e for e in mono), inverted=mono)
        sign = UniPoly.binomial_s(i) * (-1) ** i
        out = out + br * inv * sign
        br = commutator(br, fm)
    return out


# -- search -----------------------------------------------------------------

def search_sandwich(descriptor: RingDescriptor, f, template: Sequence[tuple[WeylElement, WeylElement]],
                    s_degree_bound: int, b_degree_bound: int) -> Optional[SandwichEquation]:
    """Find c_w(s) and monic b(s) with sum_w c_w(s) alpha_w f^(s+1) beta_w = b(s) f^s.

    Unknowns are the coefficients of c_w (degree <= s_degree_bound) and of
    b.  For each candidate degree of b (smallest first), b is fixed monic and
    the inhomogeneous linear system obtained from the action of every word on
    the certified grid at the sampled n is solved exactly.  Returns the first
    solution that passes verify_sandwich, or None.
    """
    nvars = descriptor.nvars
    f = _as_f(f, nvars)
    words = [(a, b) for a, b in template]
    if not words:
        return None
    nw, width = len(words), s_degree_bound + 1
    bcol = nw * width
    one = WeylElement.one(nvars)
    probe = [(a, 1, b) for a, b in words]
    N = max(b_degree_bound, s_degree_bound + sampling_bound(probe) - 2) + 2
    # rows: for each sample n, grid point m and output monomial e
    equations: list[tuple[dict[int, Fraction], dict[int, Fraction]]] = []
    for n in range(N + 1):
        ops = [_instantiate([t], f, n, nvars) for t in probe]
        fn = _f_power(f, n)
        bound = max(grid_bound(descriptor, op)[0] for op in ops + [fn])
        for m in sample_grid(descriptor, bound):
            word_rows: dict[Mono, dict[int, Fraction]] = {}
            for w, op in enumerate(ops):
                for e, c in apply(op, m).items():
                    v = c.constant_value()
                    row = word_rows.setdefault(e, {})
                    for j in range(width):
                        row[w * width + j] = row.get(w * width + j, 0) + v * n ** j
            b_rows: dict[Mono, dict[int, Fraction]] = {}
            for e, c in apply(fn, m).items():
                v = c.constant_value()
                b_rows[e] = {bcol + j: -v * n ** j for j in range(b_degree_bound + 1)}
            for e in set(word_rows) | set(b_rows):
                equations.append((word_rows.get(e, {}), b_rows.get(e, {})))
    for deg in range(b_degree_bound + 1):
        solver = SparseSolver()
        for wrow, brow in equations:
            row = {k: v for k, v in wrow.items() if v}
            rhs = Fraction(0)
            for col, v in brow.items():
                j = col - bcol
                if j < deg:
                    row[col] = v
                elif j == deg:
                    rhs -= v
            solver.add_row(row, rhs)
            if not solver.consistent:
                break
        if not solver.consistent:
            continue
        x = solver.solution(bcol + deg)
        if x is None:
            continue
        b = UniPoly(list(x[bcol:bcol + deg]) + [1])
        pairs = []
        for w, (alpha, beta) in enumerate(words):
            c = UniPoly(x[w * width:(w + 1) * width])
            if not c.is_zero():
                pairs.append((one * c * alpha, beta))
        eq = SandwichEquation(descriptor, f, tuple(pairs), b)
        if verify_sandwich(eq).ok:
            return eq
    return None


# -- Segre bracket identities -----------------------------------------------

def _segre_data(a: int, b: int) -> dict:
    from .dsl import Context, evaluate_text

    desc = RingDescriptor.segre(a, b)
    names = desc.names
    f = WeylElement.monomial(desc.nvars, tuple(int(n in ("x1", "y1")) for n in names))
    ctx = Context(names, f=f)

    def sand(text):
        return evaluate_text(text, ctx).terms

    def op(text):
        return evaluate_text(text, ctx)

    return {"desc": desc, "f": f, "sand": sand, "op": op}


def segre_identity_list(a: int, b: int) -> list[tuple[str, str, str]]:
    """(label, left side, right-side operator Q) with the identity left = f^s Q."""
    E, F = "x1*dx1", "y1*dy1"
    out = []
    for i in range(2, a + 1):
        out.append((f"A{i}", f"[x{i}*dx1, [dx{i}*dy1, f^(s+1)]]",
                    f"(s+1)^2*x{i}*dx{i} - (s+1)*{E}"))
    for j in range(2, b + 1):
        out.append((f"B{j}", f"[y{j}*dy1, [dy{j}*dx1, f^(s+1)]]",
                    f"(s+1)^2*y{j}*dy{j} - (s+1)*{F}"))
    out.append(("C", "[dx1*dy1, f^(s+1)]", f"(s+1)*{E} + (s+1)*{F} + (s+1)^2"))
    out.append(("D", f"[dx1*dy1, {E}*f^(s+1)]",
                f"(s+1)*{E}*{E} + (s+2)*{E}*{F} + 2*(s+1)^2*{E} + (s+1)^2*{F} + (s+1)^3"))
    summed = " + ".join(f"[x{i}*dx1, [dx{i}*dy1, f^(s+1)]]" for i in range(2, a + 1))
    summed += "".join(f" - [y{j}*dy1, [dy{j}*dx1, f^(s+1)]]" for j in range(2, b + 1))
    out.append(("sum", summed, f"-(s+1)*(s+{a})*{E} + (s+1)*(s+{b})*{F}"))
    return out


def segre_bracket_identities(a: int, b: int, extra_samples: int = 0) -> VerificationReport:
    """Verify the bracket identities for x1*y1 on the Segre ring, as operators on R.

    The summed identity holds only modulo the Euler operator, which is zero
    on R; the grid test sees exactly that.
    """
    if a < 2 or b < 2:
        raise ValueError("need a, b >= 2")
    data = _segre_data(a, b)
    one = WeylElement.one(data["desc"].nvars)
    parts = []
    for label, lhs, q in segre_identity_list(a, b):
        rep = verify_identity(data["desc"], data["f"], data["sand"](lhs),
                              [(one, 0, data["op"](q))], extra_samples, label)
        parts.append(rep)
    verdict = "verified" if all(p.ok for p in parts) else "refuted"
    first = next((p for p in parts if not p.ok), None)
    return VerificationReport(verdict, sorted({n for p in parts for n in p.sample_points}),
                              first.first_failure if first else None,
                              max(p.sampling_bound for p in parts),
                              max(p.grid_bound or 0 for p in parts),
                              all(p.certified for p in parts), f"segre({a},{b})", parts)


SEGRE_VARS = ("s", "A", "B", "E", "F")


def segre_generators():
    """Commutative shadows of the summed, C and D identities in Q[s,A,B,E,F]."""
    from .commutative import CPoly

    P = lambda t: CPoly.parse(t, SEGRE_VARS)  # noqa: E731
    return [P("-(s+1)*(s+A)*E + (s+1)*(s+B)*F"),
            P("(s+1)*E + (s+1)*F + (s+1)^2"),
            P("(s+1)*E^2 + (s+2)*E*F + 2*(s+1)^2*E + (s+1)^2*F + (s+1)^3")]


def segre_target():
    from .commutative import CPoly

    return CPoly.parse("(s+1)^3*(s+A)*(s+B)", SEGRE_VARS)


def _cpoly_to_operator(p, a: int, b: int, nvars: int, E: WeylElement, F: WeylElement) -> WeylElement:
    out = WeylElement.zero(nvars)
    for (es, ea, eb, ee, ef), c in p.terms.items():
        coef = UniPoly.s() ** es * (c * Fraction(a) ** ea * Fraction(b) ** eb)
        out = out + (E ** ee) * (F ** ef) * coef
    return out


def segre_equation(a: int, b: int, degree_bound: int = 4) -> Optional[SandwichEquation]:
    """Assemble the sandwich equation with b(s) = (s+1)^3 (s+a)(s+b).

    Each identity L = f^s Q is multiplied on the right by the image of its
    combination coefficient under A->a, B->b, E->x1 dx1, F->y1 dy1.
    """
    from .commutative import find_poly_combination

    coeffs = find_poly_combination(segre_target(), segre_generators(), degree_bound)
    if coeffs is None:
        return None
    data = _segre_data(a, b)
    desc, nv = data["desc"], data["desc"].nvars
    E, F = data["op"]("x1*dx1"), data["op"]("y1*dy1")
    ident = {lab: lhs for lab, lhs, _ in segre_identity_list(a, b)}
    pieces = [(ident["sum"], coeffs[0]), (ident["C"], coeffs[1]), (ident["D"], coeffs[2])]
    pairs = []
    for lhs, c in pieces:
        right = _cpoly_to_operator(c, a, b, nv, E, F)
        if right.is_zero():
            continue
        for alpha, k, beta in data["sand"](lhs):
            assert k == 1
            pairs.append((alpha, beta * right))
    bpoly = (UniPoly.from_roots([-1]) ** 3) * UniPoly.from_roots([-a]) * UniPoly.from_roots([-b])
    return SandwichEquation(desc, data["f"], tuple(pairs), bpoly)


Equation = Union[SandwichEquation, BsEquation]
