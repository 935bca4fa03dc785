"""Plain-text equation fixtures.

One directive per line, ``#`` starts a comment::

    name: veronese-xy
    ring: veronese:2:x,y
    f: x*y
    let E = x*dx + y*dy
    equation: (s+2)*dx*dy*f^(s+1) + ... = (s+1)^2*(s+2)*f^s
    expect: verified

Directives: ``ring``, ``f``, ``let NAME = expr``, exactly one of
``equation`` (sandwich or general identity), ``bs`` (delta*f^(s+1) = b*f^s)
or ``template`` (words separated by ``;``), then ``sdeg``, ``bdeg`` for
templates and ``expect`` (verified, refuted, found or none).  A
``b:`` line in a template fixture records the expected polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .dsl import Context, ResolveError, SandwichExpr, evaluate_text, scalar
from .rings import RingDescriptor
from .scalars import UniPoly
from .weyl import WeylElement

EXPECTATIONS = ("verified", "refuted", "found", "none")
_RESERVED = re.compile(r"^(d|f$|s$)")


class FixtureError(ValueError):
    pass


@dataclass
class Fixture:
    name: str
    descriptor: RingDescriptor
    f: WeylElement
    kind: str  # sandwich | identity | bs | search
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    b: Optional[UniPoly] = None
    delta: Optional[WeylElement] = None
    template: list = field(default_factory=list)
    sdeg: int = 0
    bdeg: int = 0
    expect: Optional[str] = None
    path: Optional[str] = None

    def sandwich(self, b: Optional[UniPoly] = None):
        from .sbs import SandwichEquation

        if self.kind != "sandwich":
            raise FixtureError(f"fixture {self.name} is not a sandwich equation")
        return SandwichEquation(self.descriptor, self.f,
                                tuple((a, bt) for a, _, bt in self.lhs),
                                self.b if b is None else b)

    def bs(self, b: Optional[UniPoly] = None):
        from .sbs import BsEquation

        if self.kind != "bs":
            raise FixtureError(f"fixture {self.name} is not a Bernstein-Sato equation")
        return BsEquation(self.descriptor, self.f, self.delta, self.b if b is None else b)


def _sandwich(value, what: str) -> SandwichExpr:
    if not isinstance(value, SandwichExpr):
        raise FixtureError(f"{what} must contain a power of f")
    return value


def _scalar_of(op: WeylElement) -> Optional[UniPoly]:
    if op.is_zero():
        return UniPoly()
    if len(op.terms) != 1:
        return None
    (a, b), c = next(iter(op.terms.items()))
    return c if not any(a) and not any(b) else None


def _as_b(rhs: SandwichExpr) -> Optional[UniPoly]:
    """b when the right side is b(s) f^s, else None."""
    total = UniPoly()
    for a, k, bt in rhs.terms:
        ca, cb = _scalar_of(a), _scalar_of(bt)
        if k != 0 or ca is None or cb is None:
            return None
        total = total + ca * cb
    return total


def parse_fixture(text: str, name: str = "fixture", path: Optional[str] = None) -> Fixture:
    data: dict[str, str] = {}
    lets: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("let "):
            m = re.match(r"let\s+([A-Za-z_]\w*)\s*=\s*(.+)$", line)
            if not m:
                raise FixtureError(f"line {lineno}: malformed let")
            if _RESERVED.match(m.group(1)):
                raise FixtureError(f"line {lineno}: name {m.group(1)!r} is reserved")
            lets.append((m.group(1), m.group(2)))
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise FixtureError(f"line {lineno}: expected 'key: value'")
        key = key.strip().lower()
        if key in data:
            raise FixtureError(f"line {lineno}: duplicate {key!r}")
        data[key] = value.strip()
    for req in ("ring", "f"):
        if req not in data:
            raise FixtureError(f"missing {req!r}")
    desc = RingDescriptor.parse(data["ring"])
    names = desc.names
    ctx = Context(names)
    f = evaluate_text(data["f"], ctx)
    if isinstance(f, SandwichExpr) or not f.is_multiplication():
        raise FixtureError("f must be a ring element")
    bindings: dict = {}
    for lname, expr in lets:
        if lname in names:
            raise FixtureError(f"let name {lname!r} shadows a variable")
        bindings[lname] = evaluate_text(expr, Context(names, f=f, bindings=dict(bindings)))
    ctx = Context(names, f=f, bindings=bindings)
    fx = Fixture(data.get("name", name), desc, f, "", path=path)
    fx.expect = data.get("expect")
    if fx.expect is not None and fx.expect not in EXPECTATIONS:
        raise FixtureError(f"unknown expectation {fx.expect!r}")
    kinds = [k for k in ("equation", "bs", "template") if k in data]
    if len(kinds) != 1:
        raise FixtureError("need exactly one of equation, bs, template")
    kind = kinds[0]
    try:
        if kind == "equation":
            lhs_text, rhs_text = _split_eq(data["equation"])
            lhs = _sandwich(evaluate_text(lhs_text, ctx), "left side")
            rhs = _sandwich(evaluate_text(rhs_text, ctx), "right side")
            fx.lhs, fx.rhs = lhs.terms, rhs.terms
            b = _as_b(rhs)
            if b is not None and all(k == 1 for _, k, _ in lhs.terms):
                fx.kind, fx.b = "sandwich", b
            else:
                fx.kind = "identity"
        elif kind == "bs":
            lhs_text, rhs_text = _split_eq(data["bs"])
            lhs = _sandwich(evaluate_text(lhs_text, ctx), "left side")
            one = WeylElement.one(desc.nvars)
            if any(k != 1 or bt != one for _, k, bt in lhs.terms):
                raise FixtureError("bs equations read delta*f^(s+1)")
            b = _as_b(_sandwich(evaluate_text(rhs_text, ctx), "right side"))
            if b is None:
                raise FixtureError("right side of a bs equation must be b(s)*f^s")
            delta = WeylElement.zero(desc.nvars)
            for a, _, _ in lhs.terms:
                delta = delta + a
            fx.kind, fx.delta, fx.b = "bs", delta, b
        else:
            words = []
            for w in data["template"].split(";"):
                terms = _sandwich(evaluate_text(w, ctx), "template word").terms
                if len(terms) != 1 or terms[0][1] != 1:
                    raise FixtureError(f"template word {w.strip()!r} must be alpha*f^(s+1)*beta")
                words.append((terms[0][0], terms[0][2]))
            fx.kind, fx.template = "search", words
            fx.sdeg = int(data.get("sdeg", 0))
            fx.bdeg = int(data.get("bdeg", 3))
            if "b" in data:
                fx.b = scalar(data["b"])
    except ResolveError as exc:
        raise FixtureError(str(exc)) from exc
    return fx


def _split_eq(text: str) -> tuple[str, str]:
    parts = text.split("=")
    if len(parts) != 2:
        raise FixtureError("equation needs exactly one '='")
    return parts[0], parts[1]


def load_fixture(path_or_name: str) -> Fixture:
    """Load from a path, or by name from the shipped fixtures."""
    p = Path(path_or_name)
    if p.exists():
        return parse_fixture(p.read_text(), p.stem, str(p))
    name = path_or_name[:-4] if path_or_name.endswith(".txt") else path_or_name
    res = resources.files("weylbs") / "data" / f"{name}.txt"
    if not res.is_file():
        raise FixtureError(f"no fixture file or shipped fixture named {path_or_name!r}")
    return parse_fixture(res.read_text(), name, f"<shipped>/{name}.txt")


def shipped_fixtures() -> list[str]:
    base = resources.files("weylbs") / "data"
    return sorted(p.name[:-4] for p in base.iterdir() if p.name.endswith(".txt"))
