"""Command line front end.

Exit codes: 0 success, 1 negative result (no zero found, zero rejected),
2 bad input, 3 precision exhausted after every retry.
"""

from __future__ import annotations

import argparse
import sys

from . import documents as docs
from .bounds import BoundQuery
from .errors import (
    DimensionShortfall,
    NoZeroFoundBelowGuarantee,
    PrecisionExhausted,
    QuadsysError,
    SearchSpaceTooLarge,
)
from .oracle import DEFAULT_LIMIT, ResidueSearchSpec, primitive_zero_search
from .padic import FieldContext
from .qform import FormSystem, diagonalize, random_integer_system
from .solver import find_zero_subspace, solve_system, verify_zero
from .witness import block_witness

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


def _read(path: str) -> dict:
    if path == "-":
        return docs.loads(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return docs.loads(fh.read())


def _emit(doc: dict):
    sys.stdout.write(docs.dumps(doc))


def _load_system(args) -> FormSystem:
    return docs.system_from_doc(_read(args.input), args.precision, args.max_precision)


def cmd_bound(args) -> int:
    q = BoundQuery(t=args.t, m=args.m, u1=args.u1, k=args.k, r=args.r, d=args.d, p=args.p)
    _emit(docs.make("bounds", t=args.t, reports=[r.to_dict() for r in q.reports()]))
    return EXIT_OK


def cmd_solve(args) -> int:
    system = _load_system(args)
    cert = solve_system(system)
    _emit(docs.certificate_doc(cert, system))
    return EXIT_OK


def cmd_subspace(args) -> int:
    system = _load_system(args)
    cert = find_zero_subspace(system, args.dim)
    _emit(docs.subspace_doc(cert, system))
    return EXIT_OK


def cmd_witness(args) -> int:
    ctx = FieldContext(args.p, precision=args.precision or 64)
    w = block_witness(args.t, ctx, certify=not args.no_certify, limit=args.limit)
    blocks = [{"form": i, "variables": [r.start, r.stop]} for i, r in w.blocks]
    _emit(docs.system_doc(w.system, "witness", blocks=blocks, evidence=w.anisotropy_evidence))
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = _read(args.input)
    system = docs.system_from_doc(doc)
    p = system.ctx.p
    if doc["kind"] == "witness":
        results = []
        for block in doc["blocks"]:
            i, (lo, hi) = block["form"], block["variables"]
            G = system.forms[i].exact_gram()
            sub = [row[lo:hi] for row in G[lo:hi]]
            spec = ResidueSearchSpec.from_grams([sub], p, args.level, args.limit)
            found = primitive_zero_search(spec)
            results.append({"form": i, "variables": [lo, hi], "searched": spec.points,
                            "found": list(found) if found else None})
        _emit(docs.make("oracle_result", p=p, k=args.level, blocks=results))
        return EXIT_OK if any(r["found"] for r in results) else EXIT_NEGATIVE
    spec = ResidueSearchSpec.from_system(system, args.level, args.limit)
    found = primitive_zero_search(spec)
    _emit(docs.make("oracle_result", p=p, k=args.level, searched=spec.points,
                    found=list(found) if found else None))
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    system = _load_system(args)
    vec = docs.vector_from_doc(_read(args.zero))
    report = verify_zero(system, vec, args.threshold)
    _emit(docs.make("verification", accepted=report.accepted, nontrivial=report.nontrivial,
                    valuations=[docs.valuation_out(v) for v in report.valuations],
                    threshold=report.threshold))
    return EXIT_OK if report.accepted else EXIT_NEGATIVE


def cmd_diagonalize(args) -> int:
    system = _load_system(args)
    out = []
    for f in system.forms:
        P, d = diagonalize(f)
        out.append({"P": [[docs.rational_str(x) for x in row] for row in P.entries],
                    "d": [docs.rational_str(x) for x in d],
                    "d_valuations": [docs.valuation_out(x.val) for x in d]})
    _emit(docs.make("diagonalization", p=system.ctx.p, precision=system.ctx.precision,
                    forms=out))
    return EXIT_OK


def cmd_random(args) -> int:
    ctx = FieldContext(args.p, precision=args.precision or 64)
    system = random_integer_system(ctx, args.t, args.n, args.seed, args.bound)
    _emit(docs.system_doc(system, seed=args.seed))
    return EXIT_OK


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive_int, default=None,
                        help="p-adic digits (default: the document's value, else 64)")
    common.add_argument("--max-precision", type=_positive_int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--limit", type=_positive_int, default=DEFAULT_LIMIT,
                        help="largest residue space the oracle may enumerate")

    parser = argparse.ArgumentParser(prog="quadsys", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="bound formulas for u(t)")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, default=2)
    p.add_argument("--u1", type=_positive_int, default=4)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--k", type=_positive_int, default=None)
    p.add_argument("--r", type=_positive_int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=cmd_bound)

    for name, func, helptext in (("solve", cmd_solve, "common nontrivial zero"),
                                 ("subspace", cmd_subspace, "subspace of common zeros"),
                                 ("verify", cmd_verify, "check a zero"),
                                 ("diagonalize", cmd_diagonalize, "diagonalize each form"),
                                 ("oracle", cmd_oracle, "exhaustive search mod p^k")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input", nargs="?", default="-", help="system document ('-' = stdin)")
        p.set_defaults(func=func)
        if name == "subspace":
            p.add_argument("--dim", type=_positive_int, required=True)
        if name == "verify":
            p.add_argument("--zero", required=True, help="certificate or zero document")
            p.add_argument("--threshold", type=int, default=None)
        if name == "oracle":
            p.add_argument("--level", type=_positive_int, required=True)

    p = sub.add_parser("witness", parents=[common], help="system with no nontrivial zero")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--no-certify", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("random", parents=[common], help="seeded random integer system")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=_positive_int, default=9)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (NoZeroFoundBelowGuarantee, DimensionShortfall) as exc:
        _emit(docs.make("no_zero", error=type(exc).__name__, message=str(exc)))
        print(f"no zero found: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except SearchSpaceTooLarge as exc:
        print(f"search space too large: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadsysError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
