"""Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest
(``pytest tests/test_acceptance.py -s`` shows the lines).
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbhodge.boxes import box_elements, brute_force_box  # noqa: E402
from orbhodge.clarke import (  # noqa: E402
    ClarkePair,
    HodgeTable,
    build_sheaf,
    cayley_regrade,
    dual_table,
    duality_check,
    hodge_table,
)
from orbhodge.constructions import (  # noqa: E402
    BHKData,
    LatticePolytope,
    NefPartition,
    bhk_pair,
    cayley_pair,
    maximal_group,
)
from orbhodge.fans import delta_volume, find_support_function  # noqa: E402
from orbhodge.linalg import inverse, jordan_profile, matmul, transpose  # noqa: E402
from orbhodge.sheaf import cochain_dimensions, cohomology, star_cohomology_audit  # noqa: E402
from orbhodge.tropical import (  # noqa: E402
    HeightedPoints,
    delta_heighted_points,
    regular_subdivision,
    trop_hodge,
    trop_min,
    trop_poset_0,
)
from strategies import F3, P1XP1, P2, SEIFERT, TRIVIAL2, random_clarke_pairs, random_cone  # noqa: E402

H = Fraction(1, 2)


def T(d) -> HodgeTable:
    return HodgeTable.from_items(((Fraction(l), Fraction(m)), v) for (l, m), v in d.items())


def c1():
    t0 = time.perf_counter()
    pair = ClarkePair(F3, TRIVIAL2)
    space, mirror = hodge_table(pair, "space"), hodge_table(pair, "mirror")
    dt = time.perf_counter() - t0
    ok = (
        space == T({(0, 0): 1, (H, H): 1, (1, 1): 2, (3 * H, 3 * H): 1, (2, 2): 1})
        and mirror == T({(2, 0): 1, (3 * H, H): 1, (1, 1): 2, (H, 3 * H): 1, (0, 2): 1})
        and dt < 5
    )
    return ok, f"F3 stacky tables exact, {dt:.2f}s"


def c2():
    t0 = time.perf_counter()
    named = [ClarkePair(f, TRIVIAL2) for f in (F3, P2, P1XP1)]
    randoms = random_clarke_pairs(50)
    bad = [i for i, p in enumerate(named + list(randoms)) if not duality_check(p).passed]
    dt = time.perf_counter() - t0
    return not bad and len(randoms) >= 50 and dt < 120, f"3 named + {len(randoms)} random pairs, {len(bad)} failures, {dt:.1f}s"


def c3():
    got = {name: hodge_table(ClarkePair(f, TRIVIAL2), "mirror").total() for name, f in (("P2", P2), ("P1xP1", P1XP1), ("F3", F3))}
    vols = {name: delta_volume(f) for name, f in (("P2", P2), ("P1xP1", P1XP1), ("F3", F3))}
    ok = got == vols == {"P2": 3, "P1xP1": 4, "F3": 6}
    return ok, f"totals {got}, d!·Vol {vols}"


def c4():
    details = []
    ok = True
    for n in range(2, 7):
        t0 = time.perf_counter()
        t = hodge_table(bhk_pair(BHKData(((n + 1,),))), "mirror")
        dt = time.perf_counter() - t0
        line = {k: v for k, v in t.items() if k[0] + k[1] == 1}
        want = {(Fraction(k, n + 1), 1 - Fraction(k, n + 1)): 1 for k in range(1, n + 1)}
        ok &= line == want and dt < 1
        details.append(f"A{n} {dt * 1000:.0f}ms")
    return ok, ", ".join(details)


def c5():
    B = ((3, 0, 0), (0, 3, 0), (0, 0, 3))
    a, b = bhk_pair(BHKData(B)), bhk_pair(BHKData(B, maximal_group(B)))
    ok = all(dual_table(hodge_table(a, s), 3) == hodge_table(b, s) for s in ("space", "mirror"))
    return ok, "diag(3,3,3): trivial vs maximal group tables exchange under (λ,μ) ↦ (3−λ,μ)"


def c6():
    t0 = time.perf_counter()
    np_ = NefPartition(LatticePolytope(((1, 0), (0, 1), (-1, -1))), ((0, 1, 2), ()))
    t = cayley_regrade(hodge_table(cayley_pair(np_, "compact"), "space"), 1)
    dt = time.perf_counter() - t0
    ok = t == T({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}) and dt < 60
    return ok, f"cubic curve regraded table {sorted((str(l), str(m), v) for (l, m), v in t.items())}, {dt:.2f}s"


def c7():
    pairs = [ClarkePair(f, TRIVIAL2) for f in (F3, P2, P1XP1)] + list(random_clarke_pairs(50))
    bad = 0
    for p in pairs:
        phi = find_support_function(p.fanM, strict=True)
        tp = trop_poset_0(p.fanN, regular_subdivision(delta_heighted_points(p.fanM, phi.values)))
        bad += trop_hodge(tp, orbifold=True) != hodge_table(p, "mirror")
    return bad == 0, f"{len(pairs)} pairs, {bad} mismatches"


def c8():
    hp = HeightedPoints(((0, 0), (0, 1), (1, 1), (2, 1)), (0, 0, 1, 4))
    sd = regular_subdivision(hp)
    cells = sorted(tuple(sorted(sd.cell_points(c))) for c in sd.cells)
    ok = cells == [((0, 0), (0, 1), (1, 1)), ((0, 0), (1, 1), (2, 1))]
    rng = random.Random(8)
    for _ in range(20):
        x = (Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
        ok &= trop_min(hp, x)[0] == min(0, x[1], x[0] + x[1] + 1, 2 * x[0] + x[1] + 4)
    return ok, "two triangles; trop_min agrees on 20 rational points"


def c9():
    M = matmul(inverse(SEIFERT), transpose(SEIFERT))
    neg, pos = jordan_profile(M, -1), jordan_profile(M, 1)
    ok = neg == [2] and pos == [3, 1]
    return ok, f"λ=−1: {neg}; λ=1: {pos} (6×6 monodromy; the displayed Jordan form has blocks 2 | 3,1)"


def c10():
    rng = random.Random(10)
    boxes_ok = True
    for k in range(200):
        gens, idx = random_cone(rng, 1 + k % 3)
        box = box_elements(gens)
        boxes_ok &= len(box) == idx and box == brute_force_box(gens)
        by = {b.coeffs: b for b in box}
        for b in box:
            inv = tuple(Fraction(0) if a == 0 else 1 - a for a in b.coeffs)
            boxes_ok &= b.age + by[inv].age == len(b.support())
    sheaves = [build_sheaf(ClarkePair(f, TRIVIAL2), s) for f in (F3, P2, P1XP1) for s in ("space", "mirror")]
    sheaves += [build_sheaf(p, s) for p in random_clarke_pairs(50)[::5] for s in ("space", "mirror")]
    audit_ok = all(not star_cohomology_audit(F) for F in sheaves)
    euler_ok = True
    for F in sheaves:
        C, Hh = cochain_dimensions(F), cohomology(F)
        for b in F.bidegrees():
            euler_ok &= sum((-1) ** n * c for (n, bb), c in C.items() if bb == b) == sum(
                (-1) ** n * h for (n, bb), h in Hh.items() if bb == b
            )
    comp_ok = all(not F.composition_violations() for F in sheaves)
    ok = boxes_ok and audit_ok and euler_ok and comp_ok
    return ok, f"boxes {boxes_ok}, star audit {audit_ok}, Euler {euler_ok}, composition {comp_ok} ({len(sheaves)} sheaves)"


CRITERIA = [
    (1, "F3 stacky Hodge tables", c1),
    (2, "duality sweep", c2),
    (3, "weak Fano totals", c3),
    (4, "A_n BHK spectra", c4),
    (5, "BHK mirror swap", c5),
    (6, "cubic curve pipeline", c6),
    (7, "tropical cross-route", c7),
    (8, "tropical running example", c8),
    (9, "Seifert Jordan profile", c9),
    (10, "property suites", c10),
]


def line(num, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name} -- {detail}"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn):
    ok, detail = fn()
    print(line(num, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(line(num, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
