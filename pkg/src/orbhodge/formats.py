"""JSON input documents, bundled examples and report emission."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .clarke import ClarkePair, HodgeTable
from .fans import StackyFan


class FormatError(ValueError):
    """Input document is malformed (maps to exit status 2)."""


_SUFFIXES = (".json", ".pair", ".fan", ".matrix", ".bhk", ".nef", ".trop", ".hyp")


def bundled_names() -> list[str]:
    root = resources.files("orbhodge") / "data"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def _bundled_path(name: str):
    stem = Path(name).name
    for suf in _SUFFIXES:
        if stem.endswith(suf):
            stem = stem[: -len(suf)]
    res = resources.files("orbhodge") / "data" / f"{stem}.json"
    return res if res.is_file() else None


def read_document(path: str) -> tuple[dict, bytes]:
    """Parse a JSON document from ``path``; unknown paths fall back to bundled data."""
    p = Path(path)
    if p.is_file():
        raw = p.read_bytes()
    else:
        res = _bundled_path(path)
        if res is None:
            raise FormatError(f"no such file or bundled example: {path}")
        raw = res.read_bytes()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    return doc, raw


def sha256(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise FormatError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"not a rational: {x!r}") from e
    raise FormatError(f"rationals must be integers or 'p/q' strings, got {x!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _int_matrix(rows: Any, what: str) -> list[list[int]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{what} must be a list of integer rows")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        raise FormatError(f"{what} must contain integers only")
    return rows


def parse_fan(doc: Any) -> StackyFan:
    if not isinstance(doc, dict):
        raise FormatError("fan must be an object")
    try:
        rank = doc["rank"]
        rays = _int_matrix(doc.get("rays", []), "rays")
        cones = doc.get("cones", [[]])
    except KeyError as e:
        raise FormatError(f"fan is missing field {e}") from e
    if not isinstance(rank, int) or rank < 0:
        raise FormatError("rank must be a nonnegative integer")
    weights = doc.get("weights") or [1] * len(rays)
    if len(weights) != len(rays):
        raise FormatError("weights and rays differ in length")
    if not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise FormatError("cones must be a list of index lists")
    return StackyFan(rank, tuple(map(tuple, rays)), tuple(weights), tuple(map(tuple, cones)))


def fan_document(f: StackyFan) -> dict:
    return f.to_dict()


def parse_pair(doc: dict) -> ClarkePair:
    try:
        fM, fN = parse_fan(doc["sigma"]), parse_fan(doc["sigma_check"])
    except KeyError as e:
        raise FormatError(f"pair is missing field {e}") from e
    if fM.rank != fN.rank:
        raise FormatError("sigma and sigma_check have different ranks")
    return ClarkePair(fM, fN)


def kind_of(doc: dict) -> str:
    if "kind" in doc:
        return str(doc["kind"])
    if "sigma" in doc:
        return "pair"
    if "rays" in doc:
        return "fan"
    if "matrix" in doc and "group" in doc:
        return "bhk"
    if "partition" in doc:
        return "nef"
    if "heights" in doc:
        return "heighted-points"
    if "matrix" in doc:
        return "matrix"
    raise FormatError("cannot determine the document kind")


def parse_bhk(doc: dict):
    from .constructions import BHKData, maximal_group

    B = _int_matrix(doc.get("matrix"), "matrix")
    group = doc.get("group", [])
    if group == "maximal":
        q = maximal_group(B)
    else:
        q = [[parse_rational(x) for x in g] for g in group]
    return BHKData(tuple(map(tuple, B)), tuple(map(tuple, q)))


def parse_nef(doc: dict):
    from .constructions import LatticePolytope, NefPartition

    poly = doc.get("polytope")
    if not isinstance(poly, dict) or "vertices" not in poly:
        raise FormatError("nef document needs polytope.vertices")
    verts = _int_matrix(poly["vertices"], "vertices")
    P = LatticePolytope(tuple(map(tuple, verts)))
    if [list(v) for v in P.vertices] != verts:
        # indices in the partition refer to the listed order
        order = {tuple(v): i for i, v in enumerate(P.vertices)}
        remap = [order[tuple(v)] for v in verts]
        parts = [[remap[i] for i in part] for part in doc["partition"]]
    else:
        parts = doc["partition"]
    return NefPartition(P, tuple(map(tuple, parts)))


def parse_heighted(doc: dict):
    from .tropical import HeightedPoints

    pts = _int_matrix(doc.get("points"), "points")
    hs = [parse_rational(h) for h in doc.get("heights", [])]
    return HeightedPoints(tuple(map(tuple, pts)), tuple(hs))


def parse_matrix(doc: dict) -> list[list[int]]:
    return _int_matrix(doc.get("matrix"), "matrix")


def table_rows(t: HodgeTable) -> list[tuple[Fraction, Fraction, int]]:
    return [(lam, mu, v) for (lam, mu), v in sorted(t.items()) if v]


def emit_tsv(tables: list[tuple[str | None, HodgeTable]]) -> str:
    out = []
    for k, (label, t) in enumerate(tables):
        if k:
            out.append("")
        if label is not None:
            out.append(f"# {label}")
        out.append("lambda\tmu\tdim")
        out.extend(f"{format_rational(l)}\t{format_rational(m)}\t{v}" for l, m, v in table_rows(t))
    return "\n".join(out) + "\n"


def table_json(t: HodgeTable) -> list[list]:
    return [[format_rational(l), format_rational(m), v] for l, m, v in table_rows(t)]


def parse_table_json(rows: list[list]) -> HodgeTable:
    return HodgeTable.from_items(((parse_rational(l), parse_rational(m)), int(v)) for l, m, v in rows)


def emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
