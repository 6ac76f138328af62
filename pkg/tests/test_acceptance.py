"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines are printed outside output capture) or directly:
``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from polygons import random_polygons  # noqa: E402

from toricembed.capacityfn import ball_grid, fuzzy_polydisc_stats, obstructed_fraction  # noqa: E402
from toricembed.classes import gromov_no_staircase  # noqa: E402
from toricembed.cremona import is_exceptional  # noqa: E402
from toricembed.domains import (  # noqa: E402
    WeightTuple, ball, boundary_perimeter, cut_decomposition, polygon_of_tuple_simple, stats,
)
from toricembed.ech import (  # noqa: E402
    ball_capacities, convex_capacities, disjoint_union_capacities, ellipsoid_capacities,
    lattice_path_oracle, subleading_trace,
)
from toricembed.exactnum import Surd, simplify  # noqa: E402
from toricembed.staircase import (  # noqa: E402
    check_steps, generate_steps, ghost_stairs, limit_domain, make_family, overshadow_search,
    verify_obstructive,
)
from toricembed.weights import integral_weights, weight_expansion  # noqa: E402

# pinned tolerances and budgets
WEIGHT_SAMPLES, WEIGHT_MAX_RATIO, WEIGHT_BUDGET_S = 500, 50, 5.0
POLYGON_SAMPLES, POLYGON_BUDGET_S = 20, 30.0
BALL_K, UNION_K = 10_000, 1_000
LATTICE_K, LATTICE_BUDGET_S = 6, 300.0
SUB_K, SUB_WINDOW, SUB_MAX_TOL, SUB_PER_TOL, SUB_BUDGET_S = 20_000, (10_000, 20_000), 0.01, 0.02, 60.0
CREMONA_K = 500
STAIR_NS, STAIR_K, STAIR_CENTER_TOL, STAIR_BUDGET_S = (3, 5), 12, 1e-6, 120.0
OVERSHADOW_N, OVERSHADOW_D, OVERSHADOW_BUDGET_S = 3, 18, 60.0
GHOST_N = 6
GRID_POINTS, GRID_DMAX, GRID_MIN_HITS = 50, 8, 45


def c1_weights():
    rng = random.Random(20240101)
    bad, seen = [], 0
    while seen < WEIGHT_SAMPLES:
        q = rng.randint(1, 60)
        p = rng.randint(q, WEIGHT_MAX_RATIO * q)
        if math.gcd(p, q) != 1:
            continue
        seen += 1
        W = integral_weights(p, q)
        w = weight_expansion(p, q).entries
        if (sum(W) != p + q - 1 or sum(x * x for x in W) != p * q
                or sum(w) != F(p, q) + 1 - F(1, q) or sum(x * x for x in w) != F(p, q)):
            bad.append((p, q))
    ok = not bad and integral_weights(22, 9) == (9, 9, 4, 4, 1, 1, 1, 1)
    return ok, f"{seen} samples, {len(bad)} failures, W(22,9)={integral_weights(22, 9)}", WEIGHT_BUDGET_S


def c2_cutting():
    bad = 0
    for poly in random_polygons(7, POLYGON_SAMPLES):
        t, tree = cut_decomposition(poly)
        st = stats(t)
        if st.per != boundary_perimeter(poly) or st.vol != poly.area2() or not tree.check_nesting():
            bad += 1
    return bad == 0, f"{POLYGON_SAMPLES} polygons, {bad} mismatches", POLYGON_BUDGET_S


def c3_ball_ellipsoid():
    oracle = []
    for k in range(BALL_K + 1):
        d = 0
        while (d * d + 3 * d) // 2 < k:
            d += 1
        oracle.append(d)
    ball_ok = ball_capacities(1, BALL_K).values == oracle
    union = disjoint_union_capacities([ball_capacities(1, UNION_K), ball_capacities(1, UNION_K)], UNION_K)
    union_ok = union.values == ellipsoid_capacities(1, 2, UNION_K).values
    return ball_ok and union_ok, f"ball k<={BALL_K}: {ball_ok}; B+B vs E(1,2) k<={UNION_K}: {union_ok}", None


def c4_lattice():
    t = WeightTuple(3, (1, 1))
    poly = polygon_of_tuple_simple(t).translated(1, 1)
    same_tuple = cut_decomposition(poly)[0] == t
    caps = convex_capacities(t, LATTICE_K).values
    oracle = [lattice_path_oracle(poly, k) for k in range(LATTICE_K + 1)]
    return same_tuple and caps == oracle, f"c_k={[str(c) for c in caps]}, oracle agrees: {caps == oracle}", \
        LATTICE_BUDGET_S


def c5_subleading():
    tr = subleading_trace(ball(), SUB_K)
    argmin = tr.min_indices
    n = math.isqrt(2 * argmin[0])
    triangular = all(any((m * m + 3 * m) // 2 == k and (m * m + 3 * m) % 2 == 0 for m in (n - 1, n, n + 1))
                     for k in argmin)
    # the exact value at a triangular k is n - sqrt(n^2 + 3n), which equals -3/2 for no n
    exact_min = tr.capacities[argmin[0]] - Surd(0, 1, 2 * argmin[0])
    exact_hit = simplify(exact_min) == F(-3, 2)
    window_max = tr.window_max(*SUB_WINDOW)
    max_ok = abs(window_max + 0.5) <= SUB_MAX_TOL
    tr2 = subleading_trace(WeightTuple(2, (1, 1)), SUB_K)
    per_ok = abs(tr2.min_value + 2) <= SUB_PER_TOL
    ok = exact_hit and triangular and max_ok and per_ok
    detail = (f"ball min {tr.min_value:.6f} at k={argmin} (triangular: {triangular}), "
              f"equals -3/2 exactly: {exact_hit}; window max {window_max:.5f}; "
              f"(2;1,1) min {tr2.min_value:.5f}")
    return ok, detail, SUB_BUDGET_S


def c6_cremona_invariance():
    chain = [WeightTuple(5, (2,) * 5), WeightTuple(4, (2, 2, 1, 1, 1)), WeightTuple(3, (1, 1, 1, 1))]
    seqs = [convex_capacities(t, CREMONA_K).values for t in chain]
    ok = seqs[0] == seqs[1] == seqs[2]
    return ok, f"k<={CREMONA_K}, identical: {ok}", None


def c7_accumulation():
    a_ball = stats(ball()).a0
    e12 = WeightTuple(2, (1, 1))
    a_e = stats(e12).a0
    ok = a_ball == Surd(F(7, 2), F(3, 2), 5) and a_e == Surd(3, 2, 2)
    for t in (ball(), e12, WeightTuple(3, (1, 1)), WeightTuple(F(5, 2), (1, F(1, 2)))):
        st = stats(t)
        ok &= simplify(st.a0 + 1 / st.a0) == simplify(st.per * st.per / st.vol - 2)
    return ok, f"ball a0={a_ball}, E(1,2) a0={a_e}", None


def c8_staircase():
    details, ok = [], True
    for n in STAIR_NS:
        f = make_family(n)
        steps = generate_steps(f, STAIR_K)
        checks = check_steps(f, steps)
        qp = all(c.quasi_perfect for c in checks)
        adj = all(c.adjacent_to_next and c.det_is_t for c in checks[:-1])
        dec = all(c.decreasing for c in checks[:-1])
        perfect = True
        for s in steps:
            good, trace = is_exceptional(s.class_vector())
            perfect &= good and trace.end.d == 0 and trace.end.nonzero() == (-1,)
        z_inf = float(limit_domain(f).z_inf)
        gap = abs(steps[-1].p / steps[-1].q - z_inf)
        obs_ok, _, increasing = verify_obstructive(f, STAIR_K)
        n_ok = qp and adj and dec and perfect and gap < STAIR_CENTER_TOL and obs_ok and increasing
        ok &= n_ok
        details.append(f"n={n}: qp={qp} perfect={perfect} adjacent={adj} decreasing={dec} "
                       f"gap={gap:.1e} obstructive={obs_ok}")
    return ok, "; ".join(details), STAIR_BUDGET_S


def c9_overshadow():
    rep = overshadow_search(OVERSHADOW_N, OVERSHADOW_D, block_patterns=(0, 1), a_max=0)
    full = overshadow_search(OVERSHADOW_N, OVERSHADOW_D, block_patterns=(0, 1))
    ok = rep.candidates == [] and full.candidates == []
    return ok, (f"A=0: {len(rep.arithmetic_survivors)} arithmetic survivors, {len(rep.candidates)} candidates; "
                f"all A: {len(full.candidates)} candidates"), OVERSHADOW_BUDGET_S


def c10_ghost():
    rep = ghost_stairs(Surd(1, 1, 2), GHOST_N)
    matches = all(r.matches for r in rep.rows)
    odd = all(r.below_e_prime for r in rep.rows if r.n % 2)
    even = all(r.below_e_prime for r in rep.rows if r.n % 2 == 0)
    ref = all(r.below_reference for r in rep.rows)
    ok = matches and odd and even
    return ok, (f"mu identities: {matches}; <= E' at odd n: {odd}; <= E' at even n: {even} "
                f"(even n: mu=1 > z_n/alpha); <= capacity function at all n: {ref}"), None


def c11_gromov():
    fuzzy = [fuzzy_polydisc_stats(b, eps) for b in (1, F(3, 2), 2, 5) for eps in (F(1, 100), F(1, 10), F(1, 2))]
    fuzzy_ok = all(gromov_no_staircase(s, 1) for s in fuzzy)
    ball_no = not gromov_no_staircase(ball(), 1)
    e12_no = not gromov_no_staircase(WeightTuple(2, (1, 1)), 1)
    ok = fuzzy_ok and ball_no and e12_no
    return ok, f"fuzzy family true: {fuzzy_ok}; ball false: {ball_no}; E(1,2) false: {e12_no}", None


def c12_grid():
    hits, n = obstructed_fraction(ball(), ball_grid(GRID_POINTS), GRID_DMAX)
    return hits >= GRID_MIN_HITS, f"{hits}/{n} grid points obstructed (need {GRID_MIN_HITS})", None


CRITERIA = [
    (1, "weight identities", c1_weights),
    (2, "cutting cross-check", c2_cutting),
    (3, "ball and ellipsoid capacities", c3_ball_ellipsoid),
    (4, "subtraction formula vs lattice paths", c4_lattice),
    (5, "subleading asymptotics", c5_subleading),
    (6, "Cremona capacity invariance", c6_cremona_invariance),
    (7, "accumulation points", c7_accumulation),
    (8, "staircase family", c8_staircase),
    (9, "overshadow search", c9_overshadow),
    (10, "ghost stairs", c10_ghost),
    (11, "Gromov no-staircase predicate", c11_gromov),
    (12, "obstructed grid below a0", c12_grid),
]


def evaluate(fn):
    t0 = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - t0
    if budget is not None and elapsed > budget:
        ok = False
        detail += f"; over budget {budget:.0f}s"
    return ok, detail, elapsed


def line(num, name, ok, detail, elapsed):
    return f"{'PASS' if ok else 'FAIL'} [{num:2d}] {name} ({elapsed:.2f}s): {detail}"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail, elapsed = evaluate(fn)
    with capsys.disabled():
        print("\n" + line(num, name, ok, detail, elapsed))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for num, name, fn in CRITERIA:
        ok, detail, elapsed = evaluate(fn)
        failures += not ok
        print(line(num, name, ok, detail, elapsed), flush=True)
    sys.exit(1 if failures else 0)
