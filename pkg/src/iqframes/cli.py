"""Command-line interface: JSON report on stdout, summary on stderr.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
3 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable, Sequence

from .bimodule import (
    QRBisheaf,
    bisheaf_laws,
    interchange_check,
    is_biprincipal,
    make_bisheaf,
)
from .errors import HypothesisFailed, IQFError, Inconclusive, ParseError
from .groupoid import (
    bundle_of_functor,
    functor_from_section,
    global_section_of_bundle,
    is_essential_equivalence,
    orbits_isotropy_named,
    validate,
    validate_action,
    validate_biaction,
    validate_functor,
)
from .io import biaction_to_json, digest, load_action, load_biaction, load_functor, load_groupoid, parse_set
from .morita import HSMap, _named, decide_morita, hs_compose, is_hs_invertible, morita_oracle
from .qmodule import (
    hilbert_sections,
    inner_fast,
    inner_oracle,
    module_of_action,
    principal_sections,
)
from .quantale import quantale_of_groupoid, validate_iqf
from .report import Report, jsonable
from .suites import SUITES

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class Run:
    """Accumulates the report of one invocation."""

    def __init__(self, argv: Sequence[str]) -> None:
        self.doc: dict[str, Any] = {"command": list(argv), "inputs": {}, "status": "pass"}
        self.checks = Report()
        self.result: dict[str, Any] = {}
        self.inconclusive = False

    def input(self, path: str) -> str:
        try:
            self.doc["inputs"][path] = digest(path)
        except OSError as exc:
            raise ParseError(f"cannot read file ({exc.strerror})", path) from None
        return path

    def finish(self, error: IQFError | None = None, code: int | None = None) -> tuple[dict, int]:
        doc = self.doc
        doc["checks"] = self.checks.to_json()
        doc["result"] = jsonable(self.result)
        if error is not None:
            doc["status"] = "error" if code == EXIT_INPUT else "fail"
            doc["error"] = {"type": type(error).__name__, "message": str(error),
                            "witness": jsonable(error.witness)}
            return doc, code if code is not None else EXIT_FAIL
        if self.inconclusive:
            doc["status"] = "inconclusive"
            return doc, EXIT_INCONCLUSIVE
        if not self.checks.passed:
            doc["status"] = "fail"
            return doc, EXIT_FAIL
        return doc, EXIT_PASS


def _render_set(carrier, mask: int) -> str:
    return "{" + ",".join(str(carrier[i]) for i in range(len(carrier)) if mask >> i & 1) + "}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, run: Run) -> None:
    G = load_groupoid(run.input(args.groupoid))
    run.checks.extend(validate(G))
    if run.checks.passed:
        run.result = {
            "objects": G.n_objects,
            "arrows": G.n_arrows,
            "orbits_isotropy": [[n, k] for n, k in orbits_isotropy_named(G)],
        }


def cmd_quantale(args, run: Run) -> None:
    G = load_groupoid(run.input(args.groupoid))
    Q = quantale_of_groupoid(G)
    run.checks.extend(validate_iqf(Q))
    run.result = {"elements": 1 << G.n_arrows, "partial_units": len(Q.partial_units)}
    if args.dump:
        run.result["partial_unit_list"] = [Q.render(u) for u in Q.partial_units]
        run.result["products"] = [
            [G.label(a), G.label(b), G.label(G.comp(a, b))]
            for a in range(G.n_arrows)
            for b in range(G.n_arrows)
            if G.dom[a] == G.cod[b]
        ]


def _sheaf(args, run: Run):
    G = load_groupoid(run.input(args.groupoid))
    a = load_action(run.input(args.action), G)
    rep = validate_action(a)
    run.checks.extend(rep, "action: ")
    if not rep.passed:
        return None
    return module_of_action(a, quantale_of_groupoid(G))


def cmd_sheaf(args, run: Run) -> None:
    X = _sheaf(args, run)
    if X is None:
        return
    run.checks.add("anchor condition and singleton basis", True)
    run.checks.extend(hilbert_sections(X).report, "sections: ")
    pairs = [(x, y) for x in X.elements for y in X.elements] if X.n <= 6 else \
        [(s, t) for s in X.sections for t in X.sections]
    w = next(((x, y) for x, y in pairs if inner_fast(X, x, y) != inner_oracle(X, x, y)), None)
    run.checks.add("inner_fast = inner_oracle", w is None,
                   None if w is None else [X.render(w[0]), X.render(w[1])])
    ps = principal_sections(X)
    run.checks.extend(ps.report, "principal: ")
    run.result = {
        "points": X.n,
        "sections": len(X.sections),
        "principal_sections": [X.render(s) for s in ps.sections],
        "principally_covered": ps.covered,
        "free": X.action.is_free() is None,
    }


def cmd_inner(args, run: Run) -> None:
    X = _sheaf(args, run)
    if X is None:
        return
    carrier = X.action.carrier
    x = parse_set(args.x, carrier)
    y = parse_set(args.y, carrier)
    fast, oracle, closed = inner_fast(X, x, y), inner_oracle(X, x, y), X.closed_inner(x, y)
    run.checks.add("inner_fast = inner_oracle", fast == oracle)
    run.checks.add("closed form agrees", fast == closed)
    Q = X.Q
    run.result = {
        "x": _render_set(carrier, x),
        "y": _render_set(carrier, y),
        "inner_fast": Q.render(fast),
        "inner_oracle": Q.render(oracle),
    }


def cmd_bisheaf(args, run: Run) -> None:
    b = load_biaction(run.input(args.biaction))
    rep = validate_biaction(b)
    run.checks.extend(rep, "bi-action: ")
    if not rep.passed:
        return
    X = make_bisheaf(b)
    run.checks.extend(bisheaf_laws(X), "laws: ")
    bp = is_biprincipal(X)
    run.checks.extend(bp.consistency, "consistency: ")
    out: dict[str, Any] = {"points": X.n, **bp.to_json()}
    try:
        holds, irep = interchange_check(X)
        run.checks.add("interchange ⟺ biprincipal", irep["interchange ⟺ biprincipal"].passed)
        out["interchange"] = holds
    except HypothesisFailed as exc:
        out["interchange"] = f"not applicable: {exc}"
    run.result = out


def _hs(path: str, run: Run) -> HSMap:
    b = load_biaction(run.input(path))
    return HSMap(make_bisheaf(b))


def cmd_hs_compose(args, run: Run) -> None:
    f, g = _hs(args.f, run), _hs(args.g, run)
    h = hs_compose(f, g)
    X = h.rep
    run.checks.add("composite is principal", True)
    inv = is_hs_invertible(h)
    run.result = {
        "source": h.source.name,
        "target": h.target.name,
        "points": X.n,
        "invertible": inv.invertible,
        "composite": biaction_to_json(X.b, h.target.name, h.source.name),
    }


def cmd_functor_bundle(args, run: Run) -> None:
    phi = load_functor(run.input(args.functor))
    rep = validate_functor(phi)
    run.checks.extend(rep, "functor: ")
    if not rep.passed:
        return
    X = QRBisheaf(bundle_of_functor(phi))
    hs = HSMap(X)
    run.checks.add("⟨φ⟩ is principal", True)
    sec = global_section_of_bundle(phi)
    back = functor_from_section(X.b, sec)
    run.checks.add("section round trip recovers φ", back.obj == phi.obj and back.arr == phi.arr)
    ess, erep = is_essential_equivalence(phi)
    inv = is_hs_invertible(hs)
    if ess:
        run.checks.add("essential equivalence ⟹ invertible", inv.invertible)
    run.result = {
        "points": X.n,
        "essential_equivalence": ess,
        "invertible": inv.invertible,
        "bundle": biaction_to_json(X.b, phi.target.name, phi.source.name),
    }


def cmd_morita(args, run: Run) -> None:
    g1 = load_groupoid(run.input(args.g1))
    g2 = load_groupoid(run.input(args.g2))
    for G, tag in ((g1, "g1"), (g2, "g2")):
        rep = validate(G)
        run.checks.extend(rep, f"{tag}: ")
    if not run.checks.passed:
        return
    oracle = morita_oracle(g1, g2)
    run.result = {"oracle": oracle}
    if args.oracle_only:
        run.result["invariants"] = [_named(g1), _named(g2)]
        return
    try:
        v = decide_morita(g1, g2, bound=args.bound, threads=args.threads)
    except Inconclusive as exc:
        run.inconclusive = True
        run.result.update({"verdict": "inconclusive", "bound": exc.bound,
                           "minimal_witness_size": exc.minimal_size})
        return
    run.checks.add("search agrees with the oracle", v.oracle_agrees)
    run.checks.extend(v.report, "witness: ")
    run.result.update({"verdict": "equivalent" if v.equivalent else "not equivalent", **v.to_json()})


def cmd_catalog(args, run: Run) -> None:
    if args.suite == "full":
        chosen = sorted(SUITES)
    else:
        try:
            chosen = sorted({int(s) for s in args.suite.split(",")})
        except ValueError:
            raise ParseError("expected 'full' or a comma-separated list of suite numbers",
                             "--suite") from None
        bad = [k for k in chosen if k not in SUITES]
        if bad:
            raise ParseError(f"unknown suite {bad[0]}", "--suite")
    suites = {}
    for k in chosen:
        name, fn = SUITES[k]
        kwargs: dict[str, Any] = {}
        if k != 4:
            kwargs["max_objects"] = args.max_objects
        if k == 7:
            kwargs["threads"] = args.threads
        rep = fn(**kwargs)
        suites[str(k)] = {"name": name, "pass": rep.passed, "checks": rep.to_json()}
        run.checks.add(f"suite {k}: {name}", rep.passed,
                       None if rep.passed else [c.name for c in rep.failures()])
    run.result = {"max_objects": args.max_objects, "suites": suites}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-only", action="store_true", help="suppress the stderr summary")
    common.add_argument("--threads", type=int, default=1, help="worker processes for searches")
    p = argparse.ArgumentParser(
        prog="iqframes", parents=[common],
        description="Groupoid quantales, their sheaves and bisheaves, and Morita equivalence.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "check the groupoid axioms")
    sp.add_argument("groupoid")
    sp = add("quantale", cmd_quantale, "run the inverse-quantal-frame axiom battery")
    sp.add_argument("groupoid")
    sp.add_argument("--dump", action="store_true", help="list partial units and products")
    sp = add("sheaf", cmd_sheaf, "sheaf checks for a groupoid action")
    sp.add_argument("groupoid")
    sp.add_argument("action")
    sp = add("inner", cmd_inner, "inner product of two elements, by both formulas")
    sp.add_argument("groupoid")
    sp.add_argument("action")
    sp.add_argument("--x", required=True, help="set expression such as {1,2}, 1 or 0")
    sp.add_argument("--y", required=True)
    sp = add("bisheaf", cmd_bisheaf, "principality and biprincipality of a bi-action")
    sp.add_argument("biaction")
    sp = add("hs-compose", cmd_hs_compose, "compose two Hilsum–Skandalis maps f∘g")
    sp.add_argument("f")
    sp.add_argument("g")
    sp = add("functor-bundle", cmd_functor_bundle, "the bibundle of a functor")
    sp.add_argument("functor")
    sp = add("morita", cmd_morita, "decide Morita equivalence of two groupoids")
    sp.add_argument("g1")
    sp.add_argument("g2")
    sp.add_argument("--bound", type=int, default=None, help="maximum witness size")
    sp.add_argument("--oracle-only", action="store_true")
    sp = add("catalog", cmd_catalog, "run the invariant suites over the generated catalog")
    sp.add_argument("--max-objects", type=int, default=3)
    sp.add_argument("--suite", default="full", help="'full' or e.g. '1,2,7'")
    return p


def run(argv: Sequence[str]) -> tuple[dict, int]:
    parser = build_parser()
    args = parser.parse_args(argv)
    r = Run(argv)
    try:
        args.fn(args, r)
    except ParseError as exc:
        return r.finish(exc, EXIT_INPUT)
    except IQFError as exc:
        return r.finish(exc, EXIT_FAIL)
    return r.finish()


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    doc, code = run(argv)
    sys.stdout.write(json.dumps(doc, ensure_ascii=False, indent=2) + "\n")
    if "--json-only" not in argv:
        fails = [c for c in doc["checks"] if not c["pass"]]
        status = doc["status"].upper()
        print(f"{argv[0] if argv else ''}: {status} ({len(doc['checks'])} checks, "
              f"{len(fails)} failed, {time.perf_counter() - start:.2f}s)", file=sys.stderr)
        for c in fails[:10]:
            print(f"  FAIL {c['check']}: {c.get('witness')}", file=sys.stderr)
        if "error" in doc:
            print(f"  {doc['error']['type']}: {doc['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
