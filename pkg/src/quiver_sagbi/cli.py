"""Command-line front end; every subcommand prints canonical JSON."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Dict

from .algebra import RepSpace, poly_from_json, poly_to_json
from .quiver import DimensionVector, Quiver, QuiverError, enumerate_paths, quiver_from_dict
from .sagbi import (
    KroneckerContext,
    Subductor,
    enumerate_ss_pairs,
    exact_leading_terms,
    leading_monomial_of_pair,
    max_degree_for_a,
    primitive_generators,
)
from .semiinvariants import (
    BudgetExceeded,
    check_semi_invariance,
    express_weakly_semistandard,
    f_det_cols,
    f_det_rows,
    group_order,
    semi_invariant,
)
from .tableaux import LinkedPair, RectTableau, TableauError
from .toric import (
    LatticePolytope,
    LaurentPolynomial,
    builtin_fano_example,
    classical_period,
    lattice_points,
)

log = logging.getLogger("quiver_sagbi")

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_BUDGET = 3


class InputError(Exception):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _space_from(data: dict) -> RepSpace:
    if "kronecker" in data:
        k = data["kronecker"]
        return KroneckerContext(int(k["K"]), int(k["r0"]), int(k["r1"])).space
    q, d = quiver_from_dict(data["quiver"])
    return RepSpace(q, d)


def _pair_from(data: dict) -> LinkedPair:
    try:
        space = _space_from(data)
        return LinkedPair.from_dict(space, data["pair"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pair JSON: {exc}") from exc


def _weight_key(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


# subcommands


def cmd_paths(args) -> dict:
    data = _load_json(args.input)
    try:
        q, d = quiver_from_dict(data)
    except QuiverError as exc:
        raise InputError(str(exc)) from exc
    return {
        "quiver": q.to_dict(d),
        "paths": [
            {"index": p.index, "arrows": list(p.arrows), "source": p.source, "target": p.target}
            for p in enumerate_paths(q)
        ],
    }


def _context_args(args) -> KroneckerContext:
    try:
        return KroneckerContext.from_a(args.K, args.r0, args.r1, args.a)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_pairs(args) -> dict:
    ctx = _context_args(args)
    pairs = enumerate_ss_pairs(ctx)
    if args.limit is not None and len(pairs) > args.limit:
        raise BudgetExceeded(f"{len(pairs)} pairs exceed the limit {args.limit}")
    return {
        "K": ctx.K,
        "r0": ctx.r0,
        "r1": ctx.r1,
        "a": str(ctx.a),
        "weight": list(ctx.weight),
        "count": len(pairs),
        "pairs": [p.to_dict() for p in pairs],
    }


def cmd_semiinvariant(args) -> dict:
    pair = _pair_from(_load_json(args.input))
    f = semi_invariant(pair, budget=args.budget)
    out = {
        "pair": pair.to_dict(),
        "weight": list(pair.weight.w),
        "terms": len(f),
        "polynomial": poly_to_json(f),
        "semi_invariant": check_semi_invariance(f, pair.weight, pair.space),
    }
    if args.cross_check:
        if max(group_order(pair, "+"), group_order(pair, "-")) > args.budget:
            raise BudgetExceeded("cross-check exceeds the budget")
        out["formulas_agree"] = f_det_rows(pair) == f_det_cols(pair) == f
    return out


def cmd_straighten(args) -> dict:
    pair = _pair_from(_load_json(args.input))
    terms = express_weakly_semistandard(pair)
    out: Dict[str, Any] = {
        "pair": pair.to_dict(),
        "terms": [{"coefficient": str(c), "pair": p.to_dict()} for c, p in terms],
    }
    if args.verify:
        f = semi_invariant(pair, budget=args.budget)
        total = f.ring.zero()
        for c, p in terms:
            total.add_scaled(semi_invariant(p, budget=args.budget), c)
        out["verified"] = total == f
    return out


def _sagbi_report(K: int, r0: int, r1: int, max_a, check_leading: bool) -> dict:
    max_d = max_degree_for_a(r0, r1, max_a)
    if max_d < 1:
        raise InputError("max-a must allow at least degree 1")
    t0 = time.perf_counter()
    report = primitive_generators(K, r0, r1, max_d)
    log.info("enumerated %d generators in %.1fs", len(report.generators), time.perf_counter() - t0)
    out = report.to_dict()
    out["completeness"] = f"verified up to degree {max_d}"
    out["counts_by_weight"] = {_weight_key(w): c for w, c in report.counts.items()}
    if check_leading:
        out["leading_terms_match"] = _check_leading(K, r0, r1, max_d)
    return out


def _check_leading(K: int, r0: int, r1: int, max_d: int) -> bool:
    """LM(f) equals the pair monomial for every semi-standard pair and is injective."""
    for d in range(1, max_d + 1):
        ctx = KroneckerContext(K, r0, r1, d)
        pairs = enumerate_ss_pairs(ctx)
        expected = [leading_monomial_of_pair(p) for p in pairs]
        got = exact_leading_terms(pairs)
        if any(m != e or c == 0 for (m, c), e in zip(got, expected)):
            return False
        if len(set(expected)) != len(expected):
            return False
    return True


def cmd_sagbi(args) -> dict:
    return _sagbi_report(args.K, args.r0, args.r1, args.max_a, args.check_leading)


def cmd_subduce(args) -> dict:
    data = _load_json(args.input)
    try:
        K, r0, r1 = int(data["K"]), int(data["r0"]), int(data["r1"])
        max_d = max_degree_for_a(r0, r1, data.get("max_a", 1))
        space = KroneckerContext(K, r0, r1).space
        if "polynomial" in data:
            f = poly_from_json(data["polynomial"], space.ring)
        else:
            f = space.ring.one()
            for pd in data["product"]:
                f = f * semi_invariant(LinkedPair.from_dict(space, pd))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed subduction input: {exc}") from exc
    gens = primitive_generators(K, r0, r1, max_d).generators
    res = Subductor(gens).subduce(f, max_steps=args.max_steps)
    return {
        "generators": len(gens),
        "steps": len(res.trace),
        "remainder": poly_to_json(res.remainder),
        "in_subalgebra": not res.remainder.terms,
    }


def _laurent_input(args) -> LaurentPolynomial:
    if args.builtin == "fano":
        return builtin_fano_example()[1]
    if args.input is None:
        raise InputError("give an input file or --builtin fano")
    try:
        return LaurentPolynomial.from_dict(_load_json(args.input))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed Laurent polynomial: {exc}") from exc


def cmd_period(args) -> dict:
    f = _laurent_input(args)
    seq = classical_period(f, args.n, method=args.method)
    return {"n": args.n, "period": [str(c) for c in seq]}


def cmd_lattice(args) -> dict:
    if args.builtin == "fano":
        poly = builtin_fano_example()[0]
    elif args.input is None:
        raise InputError("give an input file or --builtin fano")
    else:
        try:
            poly = LatticePolytope.from_dict(_load_json(args.input))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed polytope: {exc}") from exc
    pts = lattice_points(poly)
    verts = set(poly.vertices)
    return {
        "polytope": poly.to_dict(),
        "vertices_ok": poly.check_vertices(),
        "count": len(pts),
        "points": [list(p) for p in pts],
        "non_vertex_points": [list(p) for p in pts if p not in verts],
    }


def cmd_fano_example(args) -> dict:
    report = _sagbi_report(3, 2, 3, 2, check_leading=True)
    poly, f = builtin_fano_example()
    pts = lattice_points(poly)
    interior = [list(p) for p in pts if p not in set(poly.vertices)]
    return {
        "sagbi": {
            "counts_by_weight": report["counts_by_weight"],
            "leading_terms_match": report["leading_terms_match"],
        },
        "polytope": {
            "vertices": len(poly.vertices),
            "vertices_ok": poly.check_vertices(),
            "lattice_points": len(pts),
            "non_vertex_points": interior,
            "newton_polytope_matches": sorted(f.newton_vertices()) == sorted(poly.vertices),
        },
        "laurent_polynomial": f.to_dict(),
        "period": [str(c) for c in classical_period(f, args.n)],
    }


# fixtures


def seed_corpus(directory: Path) -> list[str]:
    """Write the worked examples as JSON fixtures and return the file names."""
    directory.mkdir(parents=True, exist_ok=True)
    q = Quiver.from_edges(3, [(0, 1), (0, 1), (0, 2), (0, 2), (0, 2), (0, 2), (1, 2)])
    d = DimensionVector((2, 2, 3))
    space = RepSpace(q, d)
    example = LinkedPair.from_tableaux(
        space,
        {2: RectTableau.from_rows(2, [[31, 52], [41, 71], [72, 62]])},
        {0: RectTableau.from_rows(0, [[31, 42], [63, 51]]), 1: RectTableau.from_rows(1, [[72], [73]])},
    )
    k2_pair = enumerate_ss_pairs(KroneckerContext(2, 2, 3))[0]
    k3_pairs = enumerate_ss_pairs(KroneckerContext(3, 2, 3))[:2]
    poly, f = builtin_fano_example()
    files = {
        "three_vertex_quiver.json": q.to_dict(d),
        "three_vertex_pair.json": {"quiver": q.to_dict(d), "pair": example.to_dict()},
        "kronecker_2_23_pair.json": {"kronecker": {"K": 2, "r0": 2, "r1": 3}, "pair": k2_pair.to_dict()},
        "fano_polytope.json": poly.to_dict(),
        "fano_laurent.json": f.to_dict(),
        "subduce_product.json": {
            "K": 3, "r0": 2, "r1": 3, "max_a": 2, "product": [p.to_dict() for p in k3_pairs],
        },
    }
    for name, obj in files.items():
        (directory / name).write_text(dumps(obj))
    return sorted(files)


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiver-sagbi", description=__doc__)
    parser.add_argument("--output", help="write JSON to this file instead of standard output")
    parser.add_argument("--quiet", action="store_true", help="suppress progress on standard error")
    parser.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1,
        help="worker count (accepted for compatibility; computations are sequential)",
    )
    parser.add_argument("--seed-corpus", metavar="DIR", help="write worked examples as fixtures and exit")
    sub = parser.add_subparsers(dest="command")

    def kron(p, degree: bool = True):
        p.add_argument("--K", type=int, required=True)
        p.add_argument("--r0", type=int, required=True)
        p.add_argument("--r1", type=int, required=True)
        if degree:
            p.add_argument("--a", default="1", help="degree as a fraction with denominator gcd(r0, r1)")

    p = sub.add_parser("paths", help="list the paths of a quiver")
    p.add_argument("input")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("pairs", help="enumerate semi-standard pairs of a Kronecker quiver")
    kron(p)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("semiinvariant", help="polynomial of a linked pair")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--cross-check", action="store_true")
    p.set_defaults(func=cmd_semiinvariant)

    p = sub.add_parser("straighten", help="weakly semi-standard expression of a pair")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_straighten)

    p = sub.add_parser("sagbi", help="primitive generators up to a degree")
    kron(p, degree=False)
    p.add_argument("--max-a", default="1")
    p.add_argument("--check-leading", action="store_true")
    p.set_defaults(func=cmd_sagbi)

    p = sub.add_parser("subduce", help="subduce a polynomial against the primitive generators")
    p.add_argument("input")
    p.add_argument("--max-steps", type=int, default=10**6)
    p.set_defaults(func=cmd_subduce)

    for name, func in (("period", cmd_period), ("lattice", cmd_lattice)):
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?")
        p.add_argument("--builtin", choices=["fano"])
        if name == "period":
            p.add_argument("--n", type=int, default=12)
            p.add_argument("--method", choices=["compositions", "split"], default="compositions")
        p.set_defaults(func=func)

    p = sub.add_parser("fano-example", help="run the toric degeneration example end to end")
    p.add_argument("--n", type=int, default=12)
    p.set_defaults(func=cmd_fano_example)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if args.seed_corpus:
        result: Any = {"fixtures": seed_corpus(Path(args.seed_corpus))}
    elif args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_MALFORMED
    else:
        if args.threads < 1:
            parser.error("--threads must be positive")
        try:
            result = args.func(args)
        except (InputError, QuiverError, TableauError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
    text = dumps(result)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
