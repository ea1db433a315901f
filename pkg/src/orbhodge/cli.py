"""Command-line front end.

    orbhodge hodge examples/f3-stacky.pair --side both
    orbhodge duality examples/p2-weakfano.pair
    orbhodge jordan examples/f3-seifert.matrix

Exit status: 0 success, 1 validation or duality failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .clarke import (
    ClarkePair,
    HodgeTable,
    cayley_regrade,
    duality_check,
    hodge_table,
    integer_graded_table,
)
from .constructions import (
    ConstructionError,
    bhk_pair,
    cayley_pair,
    stacky_hypersurface_pair,
    weak_fano_pair,
)
from .fans import StackyFan, delta_volume, find_support_function
from .formats import (
    FormatError,
    bundled_names,
    emit_json,
    emit_tsv,
    format_rational,
    kind_of,
    parse_bhk,
    parse_fan,
    parse_heighted,
    parse_matrix,
    parse_nef,
    parse_pair,
    read_document,
    sha256,
    table_json,
)
from .linalg import inverse, jordan_profile, matmul, transpose

VERBS = ("validate", "hodge", "duality", "weak-fano", "bhk", "nef", "trop", "examples", "jordan")


class Failure(Exception):
    """A predicate failed on well-formed input (exit status 1)."""


class Report:
    def __init__(self, verb: str, raw: bytes | None = None):
        self.verb = verb
        self.status = "ok"
        self.meta: dict = {"verb": verb}
        if raw is not None:
            self.meta["input_sha256"] = sha256(raw)
        self.tables: list[tuple[str | None, HodgeTable]] = []
        self.lines: list[str] = []  # human-readable diagnostics
        self.extra: dict = {}

    def fail(self, msg: str) -> None:
        self.status = "fail"
        self.lines.append(msg)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = dict(self.meta)
            payload["status"] = self.status
            payload["tables"] = [{"side": label, "rows": table_json(t)} for label, t in self.tables]
            payload["diagnostics"] = list(self.lines)
            payload.update(self.extra)
            return emit_json(payload)
        head = "".join(f"# {line}\n" for line in self.lines)
        if not self.tables:
            return head
        return head + emit_tsv(self.tables)


# -- building pairs from documents ----------------------------------------------


def pair_from_document(doc: dict, args) -> tuple[ClarkePair, str]:
    kind = kind_of(doc)
    if kind == "pair":
        return parse_pair(doc), kind
    if kind == "fan":
        return weak_fano_pair(parse_fan(doc)), kind
    if kind == "bhk":
        return bhk_pair(parse_bhk(doc)), kind
    if kind == "nef":
        return cayley_pair(parse_nef(doc), getattr(args, "variant", None) or doc.get("variant", "compact")), kind
    if kind == "stacky-hypersurface":
        return stacky_hypersurface_pair(parse_fan(doc["fan"]), doc["phi"]), kind
    raise FormatError(f"document of kind {kind!r} does not describe a Clarke pair")


def _sides(side: str) -> list[str]:
    return ["space", "mirror"] if side == "both" else [side]


def _check_pair(pair: ClarkePair, strict: bool) -> None:
    bad = pair.validate(strict=strict)
    if bad:
        raise Failure("; ".join(map(str, bad)))


# -- verbs --------------------------------------------------------------------------


def cmd_validate(args, rep: Report, doc: dict) -> None:
    kind = kind_of(doc)
    if kind == "fan" and not args.strict:
        from .fans import validate_fan

        bad = validate_fan(parse_fan(doc))
    else:
        pair, _ = pair_from_document(doc, args)
        rep.meta["rank"] = pair.rank
        bad = pair.validate(strict=args.strict)
    rep.extra["violations"] = [{"kind": v.kind, "detail": v.detail} for v in bad]
    for v in bad:
        rep.fail(str(v))
    if not bad:
        rep.lines.append("valid")


def _tables(rep: Report, pair: ClarkePair, sides: list[str], jobs: int, integer: bool = False) -> dict:
    out = {}
    for s in sides:
        t = hodge_table(pair, s, jobs=jobs)
        out[s] = t
        rep.tables.append((s, integer_graded_table(t) if integer else t))
    return out


def cmd_hodge(args, rep: Report, doc: dict) -> None:
    pair, _ = pair_from_document(doc, args)
    _check_pair(pair, args.strict)
    rep.meta.update(rank=pair.rank, side=args.side)
    _tables(rep, pair, _sides(args.side), args.jobs, args.integer)


def cmd_duality(args, rep: Report, doc: dict) -> None:
    pair, _ = pair_from_document(doc, args)
    _check_pair(pair, args.strict)
    rep.meta.update(rank=pair.rank, side="both")
    r = duality_check(pair, jobs=args.jobs)
    rep.tables += [("space", r.space), ("mirror", r.mirror)]
    if r.passed:
        rep.lines.append("duality holds")
    else:
        for (lam, mu), u, v in r.table_mismatches:
            rep.fail(f"table mismatch at ({format_rational(lam)},{format_rational(mu)}): space {u}, mirror {v}")
        for e, (lam, mu) in r.stalk_mismatches:
            rep.fail(f"stalk mismatch at {e} bidegree ({format_rational(lam)},{format_rational(mu)})")


def cmd_weak_fano(args, rep: Report, doc: dict) -> None:
    f = parse_pair(doc).fanM if kind_of(doc) == "pair" else parse_fan(doc)
    pair = weak_fano_pair(f)
    _check_pair(pair, args.strict)
    rep.meta.update(rank=pair.rank, side=args.side)
    tabs = _tables(rep, pair, ["space", "mirror"], args.jobs)
    expected = delta_volume(f)  # normalized volume, i.e. d!·Vol(Δ)
    total = tabs["mirror"].total()
    rep.extra["normalized_volume"] = expected
    if total == expected:
        rep.lines.append(f"total dimension {total} = d!·Vol(Δ)")
    else:
        rep.fail(f"total dimension {total} differs from d!·Vol(Δ) = {expected}")


def cmd_bhk(args, rep: Report, doc: dict) -> None:
    if kind_of(doc) != "bhk":
        raise FormatError("bhk verb expects a BHK document (matrix + group)")
    pair = bhk_pair(parse_bhk(doc))
    rep.meta.update(rank=pair.rank, side=args.side)
    _tables(rep, pair, _sides(args.side), args.jobs)


def cmd_nef(args, rep: Report, doc: dict) -> None:
    if kind_of(doc) != "nef":
        raise FormatError("nef verb expects a nef-partition document")
    np_ = parse_nef(doc)
    pair = cayley_pair(np_, args.variant or doc.get("variant", "compact"))
    rep.meta.update(rank=pair.rank, side="space", codimension=np_.k)
    t = hodge_table(pair, "space", jobs=args.jobs)
    rep.tables.append(("space", t))
    rep.tables.append((f"regraded by k={np_.k}", cayley_regrade(t, np_.k)))


def cmd_trop(args, rep: Report, doc: dict) -> None:
    from .tropical import delta_heighted_points, regular_subdivision, trop_hodge, trop_poset_0, verify_lower_hull

    kind = kind_of(doc)
    if kind == "heighted-points":
        hp = parse_heighted(doc)
        fan = parse_fan(doc["fan"]) if "fan" in doc else StackyFan.trivial(hp.rank)
    else:
        pair, _ = pair_from_document(doc, args)
        phi = find_support_function(pair.fanM, strict=True)
        if phi is None:
            raise Failure("sigma has no strictly convex support function")
        hp = delta_heighted_points(pair.fanM, phi.values)
        fan = pair.fanN
    sd = regular_subdivision(hp)
    if not verify_lower_hull(sd):
        raise Failure("lower-hull certificate failed")
    rep.meta.update(rank=hp.rank, side="tropical", orbifold=bool(args.orbifold))
    cells = [[list(p) for p in sd.cell_points(c)] for c in sd.cells]
    rep.extra["cells"] = cells
    if args.emit_cells:
        for c in cells:
            rep.lines.append("cell " + " ".join("(" + ",".join(map(str, p)) + ")" for p in c))
    if sd.is_star():
        tp = trop_poset_0(fan, sd)
        rep.tables.append(("tropical", trop_hodge(tp, orbifold=args.orbifold, jobs=args.jobs)))
    else:
        rep.lines.append("subdivision is not a star at the origin; no tropical Hodge table")


def cmd_jordan(args, rep: Report, doc: dict) -> None:
    M = parse_matrix(doc)
    if kind_of(doc) == "seifert":
        M = matmul(inverse(M), transpose(M))
    profile = {lam: jordan_profile(M, lam) for lam in (-1, 1)}
    rep.extra["jordan"] = {str(k): v for k, v in profile.items()}
    rep.lines.append("; ".join(f"λ={'−1' if lam < 0 else '1'}: [{','.join(map(str, b))}]" for lam, b in profile.items()))


def cmd_examples(args, rep: Report) -> str | None:
    names = bundled_names()
    if not args.inputs:
        rep.extra["examples"] = names
        rep.lines.extend(names)
        return None
    name = args.inputs[0]
    if name not in names:
        raise FormatError(f"unknown example {name!r}; try one of: {', '.join(names)}")
    doc, _ = read_document(name)
    return {
        "pair": "hodge",
        "fan": "weak-fano",
        "bhk": "bhk",
        "nef": "nef",
        "stacky-hypersurface": "hodge",
        "heighted-points": "trop",
        "seifert": "jordan",
        "matrix": "jordan",
    }[kind_of(doc)]


HANDLERS = {
    "validate": cmd_validate,
    "hodge": cmd_hodge,
    "duality": cmd_duality,
    "weak-fano": cmd_weak_fano,
    "bhk": cmd_bhk,
    "nef": cmd_nef,
    "trop": cmd_trop,
    "jordan": cmd_jordan,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbhodge", description="Orbifold irregular Hodge numbers of Clarke dual pairs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("inputs", nargs="*", help="input document(s); examples/<name> falls back to bundled data")
    p.add_argument("--side", choices=("space", "mirror", "both"), default="both")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--strict", action="store_true", help="also require convexity and quasiprojectivity")
    p.add_argument("--orbifold", action="store_true", help="trop: use the orbifold Jacobian sheaf")
    p.add_argument("--emit-cells", action="store_true", help="trop: print cell coordinates")
    p.add_argument("--variant", choices=("compact", "open-space", "open-both"))
    p.add_argument("--integer", action="store_true", help="hodge: keep only integer bidegrees")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    t0 = time.perf_counter()
    rep = Report(args.verb)
    code = 0
    try:
        verb = args.verb
        if verb == "examples":
            verb = cmd_examples(args, rep)
            if verb is not None:
                rep = Report(verb)
                rep.meta["example"] = args.inputs[0]
        if verb is not None:
            if verb != "examples" and not args.inputs:
                raise FormatError(f"{verb} needs an input document")
            doc, raw = read_document(args.inputs[0])
            rep.meta["input_sha256"] = sha256(raw)
            HANDLERS[verb](args, rep, doc)
        if rep.status != "ok":
            code = 1
    except Failure as e:
        rep.fail(str(e))
        code = 1
    except ConstructionError as e:
        rep.fail(str(e))
        code = 1
    except (FormatError, KeyError, TypeError, ValueError) as e:
        print(f"orbhodge: error: {e}", file=sys.stderr)
        return 2
    out.write(rep.render(args.format))
    if args.timing:
        print(f"elapsed {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
