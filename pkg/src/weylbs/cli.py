"""Command line interface.

JSON reports go to stdout and a one-line summary to stderr.  Exit status is
0 on success, 1 for a refuted equation or an unsuccessful search, 2 for
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .dsl import Context, ParseError, ResolveError, SandwichExpr, evaluate_text, scalar
from .rings import GridError, RingDescriptor


class UsageError(Exception):
    pass


def _emit(report: dict, summary: str) -> None:
    print(json.dumps(report, indent=2, sort_keys=False))
    print(summary, file=sys.stderr)


def _monomial(text: str, desc: RingDescriptor) -> tuple[int, ...]:
    op = evaluate_text(text, Context(desc.names))
    if isinstance(op, SandwichExpr) or len(op.terms) != 1:
        raise UsageError(f"{text!r} is not a monomial")
    (a, b), c = next(iter(op.terms.items()))
    if any(b) or c != 1:
        raise UsageError(f"{text!r} is not a monic monomial")
    return a


def _write_csv(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)


def _load(args):
    from .fixture import load_fixture

    if not args.fixture:
        raise UsageError("a fixture is required (-f FILE or a shipped fixture name)")
    return load_fixture(args.fixture)


# -- subcommands --------------------------------------------------------------

def cmd_verify(args) -> int:
    from .sbs import verify_bs, verify_identity, verify_sandwich

    fx = _load(args)
    b = scalar(args.b) if args.b else None
    if fx.kind == "sandwich":
        rep = verify_sandwich(fx.sandwich(b), args.extra_samples, fx.name)
    elif fx.kind == "bs":
        rep = verify_bs(fx.bs(b), args.extra_samples, fx.name)
    elif fx.kind == "identity":
        if b is not None:
            raise UsageError("--b only applies to equations of the form ... = b(s)*f^s")
        rep = verify_identity(fx.descriptor, fx.f, fx.lhs, fx.rhs, args.extra_samples, fx.name)
    else:
        raise UsageError(f"fixture {fx.name} is a search template; use 'search'")
    out = rep.to_dict()
    out["kind"] = fx.kind
    _emit(out, f"{fx.name}: {rep.verdict} (N={rep.sampling_bound}, B={rep.grid_bound})")
    return 0 if rep.ok else 1


def cmd_search(args) -> int:
    from .sbs import search_sandwich

    fx = _load(args)
    if fx.kind != "search":
        raise UsageError(f"fixture {fx.name} has no template")
    sdeg = fx.sdeg if args.sdeg is None else args.sdeg
    bdeg = fx.bdeg if args.bdeg is None else args.bdeg
    eq = search_sandwich(fx.descriptor, fx.f, fx.template, sdeg, bdeg)
    names = fx.descriptor.names
    if eq is None:
        _emit({"label": fx.name, "found": False, "sdeg": sdeg, "bdeg": bdeg},
              f"{fx.name}: no equation within the template")
        return 1
    out = {"label": fx.name, "found": True, "b": eq.b.to_text(),
           "pairs": [{"alpha": a.to_text(names), "beta": bt.to_text(names)} for a, bt in eq.pairs]}
    if fx.b is not None:
        out["matchesExpected"] = eq.b == fx.b.monic()
    _emit(out, f"{fx.name}: found b(s) = {eq.b.to_text()}")
    return 0


def cmd_collapse(args) -> int:
    from .sbs import collapse_to_bs, verify_bs

    fx = _load(args)
    bs = collapse_to_bs(fx.sandwich())
    rep = verify_bs(bs, label=fx.name)
    out = {"label": fx.name, "delta": bs.delta.to_text(fx.descriptor.names),
           "b": bs.b.to_text(), "report": rep.to_dict()}
    _emit(out, f"{fx.name}: collapsed equation {rep.verdict}")
    return 0 if rep.ok else 1


def cmd_nu(args) -> int:
    from .charp import nu_sweep

    desc = RingDescriptor.parse(args.ring)
    f = _monomial(args.f, desc)
    primes = [int(p) for p in args.primes.split(",") if p.strip()]
    res = nu_sweep(desc, f, args.module, primes, args.degree, args.vmax)
    out = res.to_dict()
    out.update({"ring": desc.to_dict(), "f": list(f), "module": args.module})
    table = ", ".join(f"p={p}: {v}" for p, v in res.per_prime)
    _emit(out, f"nu: {table}; r(0) = {res.predicted_root}")
    return 0 if res.polynomial else 1


def cmd_fit(args) -> int:
    from .charp import fit_r_and_predict

    pts = []
    for item in args.points.split(","):
        p, _, v = item.partition(":")
        pts.append((int(p), int(v)))
    res = fit_r_and_predict(pts, args.degree)
    _emit(res.to_dict(), f"r(p) = {res.fitted.to_text() if res.fitted else 'non-polynomial'}")
    return 0 if res.polynomial else 1


def cmd_filtration(args) -> int:
    from .filtration import filtration_stats

    desc = RingDescriptor.parse(args.ring)
    st = filtration_stats(desc, args.w, args.imax)
    _write_csv(args.csv, st.to_csv())
    out = st.to_dict()
    if st.upper_bound:
        out["caveat"] = "counts ambient operators preserving R; an upper bound for Segre rings"
    _emit(out, f"Dim ~ {st.fitted_dim:.3f}, e ~ {st.fitted_e:.4f}")
    return 0


def cmd_diffsig(args) -> int:
    from .filtration import differential_signature_estimate

    desc = RingDescriptor.parse(args.ring)
    tab = differential_signature_estimate(desc, args.nmax)
    _write_csv(args.csv, tab.to_csv())
    _emit(tab.to_dict(), f"signature estimate {tab.signature_estimate} ~ {float(tab.signature_estimate):.4f}")
    return 0


def cmd_segre(args) -> int:
    from .sbs import segre_bracket_identities, segre_equation, verify_sandwich

    rep = segre_bracket_identities(args.a, args.b, args.extra_samples)
    out = rep.to_dict()
    ok = rep.ok
    if args.full:
        eq = segre_equation(args.a, args.b)
        if eq is None:
            out["full"] = {"found": False}
            ok = False
        else:
            full = verify_sandwich(eq, label="assembled")
            out["full"] = {"found": True, "b": eq.b.to_text(), "terms": len(eq.pairs),
                           "report": full.to_dict()}
            ok = ok and full.ok
    _emit(out, f"segre({args.a},{args.b}): {'verified' if ok else 'refuted'}")
    return 0 if ok else 1


def cmd_fixtures(args) -> int:
    from .fixture import load_fixture, shipped_fixtures

    out = []
    for name in shipped_fixtures():
        fx = load_fixture(name)
        out.append({"name": name, "kind": fx.kind, "expect": fx.expect, "ring": fx.descriptor.to_dict()})
    _emit({"fixtures": out}, f"{len(out)} shipped fixtures")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylbs", description="Sandwich Bernstein-Sato toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def fixture_arg(p):
        p.add_argument("-f", "--fixture", help="fixture file or shipped fixture name")

    p = sub.add_parser("verify", help="verify a sandwich, Bernstein-Sato or general equation")
    fixture_arg(p)
    p.add_argument("--b", help="override b(s), e.g. '(s+1)^2'")
    p.add_argument("--extra-samples", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="solve for template coefficients and b(s)")
    fixture_arg(p)
    p.add_argument("--sdeg", type=int)
    p.add_argument("--bdeg", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("collapse", help="collapse a sandwich equation to a Bernstein-Sato one")
    fixture_arg(p)
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("nu", help="nu invariants over primes and the fitted root")
    p.add_argument("--ring", required=True)
    p.add_argument("--f", required=True, help="monomial, e.g. x*y")
    p.add_argument("-p", "--primes", default="5,7,11")
    p.add_argument("--module", required=True, help="veronese-odd, segre-a:I or segre-b:J")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--vmax", type=int)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("fit", help="interpolate r(p) through (p, nu) points")
    p.add_argument("--points", required=True, help="e.g. 5:3,7:5,11:9")
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("filtration", help="Bernstein filtration counts and Dim/e")
    p.add_argument("--ring", default="veronese:2:x,y")
    p.add_argument("--w", type=int, default=3)
    p.add_argument("--imax", type=int, default=200)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("diffsig", help="differential power colengths and signature estimate")
    p.add_argument("--ring", default="veronese:2:x,y")
    p.add_argument("--nmax", type=int, default=60)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_diffsig)

    p = sub.add_parser("segre-identities", help="bracket identities for x1*y1 on a Segre ring")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--full", action="store_true", help="also assemble and verify the full equation")
    p.add_argument("--extra-samples", type=int, default=0)
    p.set_defaults(func=cmd_segre)

    p = sub.add_parser("fixtures", help="list shipped fixtures")
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .fixture import FixtureError

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FixtureError, ParseError, ResolveError, GridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
