"""Command line front end.

    polaramp run [--file F] [--format json|table] [--max-k N]
    polaramp lattice show enriques

Exit codes: 0 when every query was evaluated (whatever the verdicts), 2 on
invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from . import enriques, k3
from .certificates import PreconditionError, Verdict
from .lattice import (
    ENRIQUES_BASIS_LABELS,
    ENRIQUES_LATTICE,
    InvalidSurface,
    Lattice,
    LatticeError,
    PolarizedSurface,
    SurfaceKind,
    is_effective,
    validate_surface,
)

K3_OPS = {"validate", "nef", "ample", "spanned", "kva", "kspanned", "birkva", "clifford", "gonality", "exceptional", "scan"}
ENRIQUES_OPS = {"validate", "nef", "ample", "spanned", "kva", "kspanned", "phi", "kmax", "scan"}
ALL_OPS = K3_OPS | ENRIQUES_OPS
NEEDS_K = {"kva", "kspanned", "birkva"}

CITATIONS = {
    ("k3", "kva", "ViolatorFound"): "K3 k-very ampleness criterion: (*) violator",
    ("k3", "kva", "DegreeBound"): "K3 k-very ampleness criterion: L^2 < 4k",
    ("k3", "kva", "NoViolator"): "K3 k-very ampleness criterion: L^2 >= 4k and no (*) divisor",
    ("k3", "birkva", "ViolatorFound"): "K3 birational criterion: (**) violator",
    ("k3", "birkva", "DegreeBound"): "K3 birational criterion: L^2 < 4k",
    ("k3", "birkva", "NoViolator"): "K3 birational criterion: L^2 >= 4k and no (**) divisor",
    ("k3", "spanned", "NotSpanned"): "base point freeness: elliptic class E with E.L = 1",
    ("k3", "spanned", "NoViolator"): "base point freeness: no elliptic class E with E.L = 1",
    ("enriques", "kva", "ViolatorFound"): "Enriques criterion: nodal G.L <= k-1 or isotropic f.L <= k+1",
    ("enriques", "kva", "NoViolator"): "Enriques criterion: no nodal G.L <= k-1, no isotropic f.L <= k+1",
    ("any", "nef", "NotNef"): "nefness: (-2)-curve G with G.L < 0",
    ("any", "nef", "NoViolator"): "nefness: no (-2)-curve G with G.L < 0",
    ("any", "ample", "ViolatorFound"): "ampleness: (-2)-curve G with G.L = 0",
    ("any", "ample", "NoViolator"): "ampleness: nef and no contracted (-2)-curve",
    ("any", "any", "NotBig"): "precondition: L^2 > 0 and L.h > 0 required",
    ("any", "any", "NotNef"): "precondition: L must be nef",
    ("any", "any", "NotSpanned"): "precondition: L must be base point free",
}
HIGHER_ORDER_EQUIVALENCE = "rank-2 bundle criterion: equivalent to the gonality bound (no bundle constructed)"


def citation(kind: str, op: str, clause: str) -> str:
    op = {"kspanned": "kva"}.get(op, op)
    if kind == "enriques" and op == "spanned":
        op = "kva"
    for key in ((kind, op, clause), ("any", op, clause), ("any", "any", clause)):
        if key in CITATIONS:
            return CITATIONS[key]
    return ""


class InputError(ValueError):
    """Invalid query file: the CLI reports it and exits with status 2."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass
class Query:
    op: str
    L: Optional[tuple[int, ...]]
    k: Optional[int]


@dataclass
class QueryFile:
    kind: SurfaceKind
    gram: Optional[list[list[int]]]
    h: list[int]
    nodal_classes: list[list[int]] = field(default_factory=list)
    queries: list[Query] = field(default_factory=list)


# ---------------------------------------------------------------------------
# parsing


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError("ParseError", f"{where}: expected an integer, got {value!r}")
    return value


def _vector(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not value:
        raise InputError("ParseError", f"{where}: expected a nonempty list of integers")
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _matrix(value: Any, where: str) -> list[list[int]]:
    if not isinstance(value, list) or not value:
        raise InputError("ParseError", f"{where}: expected a nonempty list of rows")
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    for i, r in enumerate(rows):
        if len(r) != len(rows):
            raise InputError("ParseError", f"{where}[{i}]: row has length {len(r)}, matrix is not square ({len(rows)} rows)")
    return rows


def parse_document(doc: Any) -> QueryFile:
    if not isinstance(doc, dict):
        raise InputError("ParseError", "top level must be an object")
    unknown = set(doc) - {"kind", "gram", "h", "nodal_classes", "queries"}
    if unknown:
        raise InputError("ParseError", f"unknown top-level fields {sorted(unknown)}")
    kind_raw = doc.get("kind")
    if kind_raw not in ("k3", "enriques"):
        raise InputError("ParseError", f"kind: expected 'k3' or 'enriques', got {kind_raw!r}")
    kind = SurfaceKind(kind_raw)
    gram = _matrix(doc["gram"], "gram") if "gram" in doc else None
    if kind is SurfaceKind.K3 and gram is None:
        raise InputError("ParseError", "gram: required for kind 'k3'")
    if "h" not in doc:
        raise InputError("ParseError", "h: required")
    h = _vector(doc["h"], "h")
    nodal_raw = doc.get("nodal_classes", [])
    if not isinstance(nodal_raw, list):
        raise InputError("ParseError", "nodal_classes: expected a list of integer vectors")
    nodal = [_vector(v, f"nodal_classes[{i}]") for i, v in enumerate(nodal_raw)]
    queries_raw = doc.get("queries", [])
    if not isinstance(queries_raw, list):
        raise InputError("ParseError", "queries: expected a list")
    allowed = K3_OPS if kind is SurfaceKind.K3 else ENRIQUES_OPS
    queries = []
    for i, q in enumerate(queries_raw):
        where = f"queries[{i}]"
        if not isinstance(q, dict):
            raise InputError("ParseError", f"{where}: expected an object")
        extra = set(q) - {"op", "L", "k"}
        if extra:
            raise InputError("ParseError", f"{where}: unknown fields {sorted(extra)}")
        op = q.get("op")
        if op not in ALL_OPS:
            raise InputError("ParseError", f"{where}.op: unknown operation {op!r}")
        if op not in allowed:
            raise InputError("ParseError", f"{where}.op: {op!r} is not available for kind {kind.value!r}")
        L = tuple(_vector(q["L"], f"{where}.L")) if "L" in q else None
        if L is None and op != "validate":
            raise InputError("ParseError", f"{where}.L: required for op {op!r}")
        k = _int(q["k"], f"{where}.k") if "k" in q else None
        if op in NEEDS_K and k is None:
            raise InputError("ParseError", f"{where}.k: required for op {op!r}")
        if k is not None and k < (1 if op == "birkva" else 0):
            raise InputError("ParseError", f"{where}.k: out of range ({k})")
        queries.append(Query(op, L, k))
    return QueryFile(kind, gram, h, nodal, queries)


def load_text(text: str, fmt: str = "json") -> QueryFile:
    if fmt == "toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InputError("ParseError", f"TOML: {exc}") from None
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("ParseError", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(doc)


def build_surface(qf: QueryFile) -> PolarizedSurface:
    try:
        lattice = Lattice.from_rows(qf.gram) if qf.gram is not None else None
        surface = validate_surface(lattice, qf.kind, qf.h, qf.nodal_classes)
    except InvalidSurface as exc:
        raise InputError("InvalidSurface", str(exc)) from None
    except LatticeError as exc:
        raise InputError("InvalidSurface", str(exc)) from None
    for i, q in enumerate(qf.queries):
        if q.L is not None and len(q.L) != surface.rank:
            raise InputError("ParseError", f"queries[{i}].L: length {len(q.L)} does not match lattice rank {surface.rank}")
    return surface


# ---------------------------------------------------------------------------
# evaluation


def _verdict_record(kind: str, op: str, verdict: Verdict) -> dict:
    rec = verdict.to_dict()
    rec["citation"] = citation(kind, op, verdict.clause.value)
    return rec


def _precondition_record(kind: str, op: str, exc: PreconditionError) -> dict:
    rec = {"answer": False, "clause": exc.clause.value, "witness": None}
    if exc.verdict is not None and exc.verdict.witness is not None:
        rec["witness"] = exc.verdict.witness.to_dict()
    rec["citation"] = citation(kind, op, exc.clause.value)
    return rec


def _scan(surface: PolarizedSurface, L: tuple[int, ...], max_k: Optional[int]) -> dict:
    top = surface.square(L) // 4 + 1 if max_k is None else max_k
    rows = []
    spanned = None
    if surface.kind is SurfaceKind.K3:
        try:
            spanned = bool(k3.is_spanned(surface, L))
        except PreconditionError:
            spanned = False
    for k in range(0, top + 1):
        row: dict[str, Any] = {"k": k}
        if surface.kind is SurfaceKind.K3:
            row["kva"] = k3.is_k_very_ample(surface, L, k).answer
            row["birkva"] = k3.is_birationally_k_very_ample(surface, L, k).answer if k >= 1 and spanned else None
        else:
            row["kva"] = enriques.is_k_very_ample_enriques(surface, L, k).answer
        rows.append(row)
    return {"rows": rows}


def evaluate(surface: PolarizedSurface, q: Query, max_k: Optional[int] = None) -> dict:
    kind = surface.kind.value
    is_k3 = surface.kind is SurfaceKind.K3
    L = q.L
    op = q.op
    try:
        if op == "validate":
            rec: dict[str, Any] = {"valid": True, "signature": list(surface.lattice.signature)}
            if L is not None:
                rec.update(
                    L_sq=surface.square(L),
                    L_h=surface.degree(L),
                    effectivity=is_effective(surface, L).value,
                )
            return rec
        if op == "nef":
            v = k3.is_nef(surface, L) if is_k3 else enriques.is_nef_enriques(surface, L)
            return _verdict_record(kind, op, v)
        if op == "ample":
            v = k3.is_ample(surface, L) if is_k3 else enriques.is_ample_enriques(surface, L)
            return _verdict_record(kind, op, v)
        if op == "spanned":
            v = k3.is_spanned(surface, L) if is_k3 else enriques.is_k_very_ample_enriques(surface, L, 0)
            return _verdict_record(kind, op, v)
        if op in ("kva", "kspanned"):
            if is_k3:
                v = k3.is_k_very_ample(surface, L, q.k) if op == "kva" else k3.is_k_spanned(surface, L, q.k)
            else:
                v = enriques.is_k_very_ample_enriques(surface, L, q.k)
            return _verdict_record(kind, op, v)
        if op == "birkva":
            rec = _verdict_record(kind, op, k3.is_birationally_k_very_ample(surface, L, q.k))
            rec["rank2_bundle_criterion"] = HIGHER_ORDER_EQUIVALENCE
            return rec
        if op == "clifford":
            rec = k3.clifford_index(surface, L).to_dict()
            rec["citation"] = "Clifford index c = min(k1, k2) - 1"
            return rec
        if op == "gonality":
            return {
                "gonality": k3.min_gonality(surface, L),
                "citation": "minimal gonality = 2 + largest k with L birationally k-very ample",
            }
        if op == "exceptional":
            flag, pair = k3.detect_exceptional(surface, L)
            return {
                "exceptional": flag,
                "decomposition": None if pair is None else {"D": list(pair[0]), "Gamma": list(pair[1])},
            }
        if op == "phi":
            return {"phi": enriques.phi(surface, L)}
        if op == "kmax":
            return enriques.max_k_enriques(surface, L).to_dict()
        if op == "scan":
            return _scan(surface, L, max_k)
    except PreconditionError as exc:
        return _precondition_record(kind, op, exc)
    raise InputError("ParseError", f"unsupported op {op!r}")


def run(qf: QueryFile, max_k: Optional[int] = None, timing: bool = False) -> dict:
    surface = build_surface(qf)
    results = []
    for i, q in enumerate(qf.queries):
        start = time.perf_counter_ns()
        rec = {"index": i, "op": q.op, "L": None if q.L is None else list(q.L), "k": q.k}
        rec.update(evaluate(surface, q, max_k))
        if timing:
            rec["elapsed_us"] = (time.perf_counter_ns() - start) // 1000
        results.append(rec)
    return {
        "surface": {
            "kind": surface.kind.value,
            "rank": surface.rank,
            "h": list(surface.h),
            "nodal_classes": [list(g) for g in surface.nodal_classes],
        },
        "results": results,
    }


def dump_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(a) for a in v) + ")"


def format_table(report: dict) -> str:
    s = report["surface"]
    lines = [f"surface: {s['kind']}  rank {s['rank']}  h = {_fmt_vec(s['h'])}"]
    if s["nodal_classes"]:
        lines.append("nodal classes: " + ", ".join(_fmt_vec(g) for g in s["nodal_classes"]))
    for rec in report["results"]:
        head = f"[{rec['index']}] {rec['op']}"
        if rec["L"] is not None:
            head += f" L={_fmt_vec(rec['L'])}"
        if rec["k"] is not None:
            head += f" k={rec['k']}"
        if "answer" in rec:
            lines.append(f"{head}: {str(rec['answer']).lower()} ({rec['clause']})")
            w = rec.get("witness")
            if w is not None:
                lines.append(
                    f"    witness D={_fmt_vec(w['D'])}  D^2={w['D_sq']}  D.L={w['DL']}"
                    f"  failing degree {w['failing_degree']}  [{w['kind']}]"
                )
            if rec.get("citation"):
                lines.append(f"    {rec['citation']}")
        elif "rows" in rec:
            lines.append(f"{head}:")
            lines.append("     k  kva    birkva")
            for row in rec["rows"]:
                bir = row.get("birkva")
                bir_s = "-" if bir is None else str(bir).lower()
                lines.append(f"    {row['k']:>2}  {str(row['kva']).lower():<6} {bir_s}")
        else:
            body = {key: val for key, val in rec.items() if key not in ("index", "op", "L", "k")}
            parts = ", ".join(f"{key}={json.dumps(val, sort_keys=True)}" for key, val in sorted(body.items()))
            lines.append(f"{head}: {parts}")
    return "\n".join(lines) + "\n"


def show_enriques(fmt: str) -> str:
    if fmt == "json":
        return dump_json({"basis": list(ENRIQUES_BASIS_LABELS), "gram": [list(r) for r in ENRIQUES_LATTICE.gram]})
    width = 4
    lines = ["U + E8(-1), basis: " + " ".join(ENRIQUES_BASIS_LABELS)]
    lines.append(" " * 4 + "".join(f"{lab:>{width}}" for lab in ENRIQUES_BASIS_LABELS))
    for lab, row in zip(ENRIQUES_BASIS_LABELS, ENRIQUES_LATTICE.gram):
        lines.append(f"{lab:>3} " + "".join(f"{a:>{width}}" for a in row))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polaramp", description="Positivity of line bundles on K3 and Enriques surfaces")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="evaluate a query file")
    run_p.add_argument("--file", help="query file (JSON, or TOML by .toml suffix); stdin if omitted")
    run_p.add_argument("--format", choices=["json", "table"], default="table")
    run_p.add_argument("--input-format", choices=["json", "toml"], help="override input detection")
    run_p.add_argument("--max-k", type=int, help="upper k for scan queries")
    run_p.add_argument("--timing", action="store_true", help="add elapsed_us to every record")
    lat_p = sub.add_parser("lattice", help="inspect built-in lattices")
    lat_p.add_argument("action", choices=["show"])
    lat_p.add_argument("name", choices=["enriques"])
    lat_p.add_argument("--format", choices=["json", "table"], default="table")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "lattice":
        sys.stdout.write(show_enriques(args.format))
        return 0
    try:
        if args.file:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        fmt = args.input_format or ("toml" if args.file and args.file.endswith(".toml") else "json")
        if args.max_k is not None and args.max_k < 0:
            raise InputError("ParseError", "--max-k must be nonnegative")
        report = run(load_text(text, fmt), max_k=args.max_k, timing=args.timing)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dump_json(report) if args.format == "json" else format_table(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
