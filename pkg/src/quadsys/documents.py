"""JSON documents exchanged by the command line tools.

Every document is an object with ``"schema": 1`` and a ``"kind"`` field.
Rationals travel as strings (``"3"``, ``"-1/2"``) so nothing passes through
floating point; infinite valuations are written as ``"inf"``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .padic import INF, FieldContext, Padic
from .qform import FormSystem, QuadraticForm

SCHEMA = 1


class DocumentError(ValueError):
    pass


def rational_str(x) -> str:
    if isinstance(x, Padic):
        x = x.to_fraction()
    return str(Fraction(x))


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise DocumentError(f"expected an integer or a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}") from exc


def valuation_out(v):
    return "inf" if v == INF else int(v)


def valuation_in(v):
    return INF if v == "inf" else int(v)


def make(kind: str, **fields) -> dict:
    return {"schema": SCHEMA, "kind": kind, **fields}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("document must be an object with a 'kind' field")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise DocumentError(f"unsupported schema {doc.get('schema')!r}")
    return doc


def system_doc(sys: FormSystem, kind: str = "system", **extra) -> dict:
    return make(kind, p=sys.ctx.p, precision=sys.ctx.precision, n=sys.n,
                forms=[[[rational_str(x) for x in row] for row in f.exact_gram()]
                       for f in sys.forms], **extra)


def system_from_doc(doc: dict, precision: int | None = None,
                    max_precision: int | None = None) -> FormSystem:
    try:
        p = int(doc["p"])
        n = int(doc["n"])
        forms = doc["forms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"system document lacks p, n or forms: {exc}") from exc
    prec = precision or int(doc.get("precision", 64))
    kwargs = {"precision": prec}
    if max_precision is not None:
        kwargs["max_precision"] = max_precision
    ctx = FieldContext(p, **kwargs)
    fmt = doc.get("format", "gram")
    if not isinstance(forms, list) or not forms:
        raise DocumentError("'forms' must be a non-empty list")
    out = []
    for M in forms:
        if not isinstance(M, list) or len(M) != n or any(
                not isinstance(row, list) or len(row) != n for row in M):
            raise DocumentError(f"every form must be an {n}x{n} matrix")
        exact = [[parse_rational(x) for x in row] for row in M]
        if fmt == "gram":
            out.append(QuadraticForm.from_rationals(ctx, exact))
        elif fmt == "coefficients":
            out.append(QuadraticForm.from_coefficients(ctx, exact))
        else:
            raise DocumentError(f"unknown form format {fmt!r}")
    return FormSystem(out, ctx, n)


def vector_from_doc(doc) -> list[Fraction]:
    if isinstance(doc, list):
        return [parse_rational(x) for x in doc]
    if doc.get("kind") == "certificate":
        return [parse_rational(x) for x in doc["zero"]]
    if doc.get("kind") == "zero":
        return [parse_rational(x) for x in doc["vector"]]
    raise DocumentError(f"no vector in a {doc.get('kind')!r} document")


def certificate_doc(cert, sys: FormSystem) -> dict:
    return make("certificate", p=sys.ctx.p, precision=sys.ctx.precision, n=sys.n,
                zero=[rational_str(x) for x in cert.zero],
                residual_valuations=[valuation_out(v) for v in cert.residual_valuations],
                trace=cert.trace, working_precision=cert.precision)


def subspace_doc(cert, sys: FormSystem) -> dict:
    B = cert.subspace.basis
    return make("subspace_certificate", p=sys.ctx.p, precision=sys.ctx.precision, n=sys.n,
                dim=B.cols, basis=[[rational_str(x) for x in col] for col in B.columns()],
                residual=valuation_out(cert.residual), trace=cert.trace,
                working_precision=cert.precision)
