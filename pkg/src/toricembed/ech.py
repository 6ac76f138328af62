"""ECH capacity sequences of balls, ellipsoids, disjoint unions and convex
toric domains, plus lattice-path lengths and subleading asymptotics."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence

from . import kernels
from .domains import DomainError, RationalPolygon, WeightTuple, convex_hull, stats
from .exactnum import RootExpr, as_fraction, format_rational, sign


@dataclass
class CapacitySequence:
    """c_0, c_1, ... of one domain; ``extend`` recomputes to a longer range."""

    descriptor: str
    values: list
    builder: Optional[Callable[[int], list]] = field(default=None, repr=False)

    def extend(self, K: int) -> "CapacitySequence":
        if K >= len(self.values):
            if self.builder is None:
                raise IndexError(f"{self.descriptor} is only known up to k={len(self.values) - 1}")
            self.values = list(self.builder(K))
        return self

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self.values[k]
        self.extend(k)
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def to_csv(self) -> str:
        rows = ["k,c_k"] + [f"{k},{format_rational(c)}" for k, c in enumerate(self.values)]
        return "\n".join(rows) + "\n"


def _lcd(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, as_fraction(v).denominator)
    return out


def ball_degree(k: int) -> int:
    """Least n with (n^2 + 3n)/2 >= k."""
    n = max(0, math.isqrt(2 * k) - 2)
    while (n * n + 3 * n) // 2 < k:
        n += 1
    return n


def ball_capacities(a, K: int) -> CapacitySequence:
    a = as_fraction(a)
    if a <= 0 or K < 0:
        raise DomainError("need a > 0 and K >= 0")

    def build(n):
        return [ball_degree(k) * a for k in range(n + 1)]

    return CapacitySequence(f"B({a})", build(K), build)


def ellipsoid_capacities(a, b, K: int) -> CapacitySequence:
    """Sorted multiset {i*a + j*b}; the entries are exact for rationals or surds."""
    if sign(a) <= 0 or sign(b) <= 0:
        raise DomainError("ellipsoid parameters must be positive")

    def build(n):
        out = []
        heap = [(0, 0, 0)]
        while len(out) <= n:
            v, i, j = heapq.heappop(heap)
            out.append(v)
            heapq.heappush(heap, (v + a, i + 1, j))
            if i == 0:
                heapq.heappush(heap, (v + b, 0, j + 1))
        return out

    return CapacitySequence(f"E({a},{b})", build(K), build)


def maxplus(f: Sequence, g: Sequence, K: int) -> list:
    """h_k = max_{i+j=k} f_i + g_j, the disjoint-union rule."""
    return [max(f[i] + g[k - i] for i in range(k + 1)) for k in range(K + 1)]


def disjoint_union_capacities(parts: Sequence[CapacitySequence], K: int) -> CapacitySequence:
    if not parts:
        return CapacitySequence("empty", [Fraction(0)] * (K + 1))
    for p in parts:
        p.extend(K)

    def build(n):
        acc = parts[0][: n + 1] if len(parts[0]) > n else parts[0].extend(n)[: n + 1]
        for p in parts[1:]:
            acc = maxplus(acc, p.extend(n)[: n + 1], n)
        return acc

    name = " + ".join(p.descriptor for p in parts)
    return CapacitySequence(name, build(K), build)


def ball_union_capacities(radii: Sequence, K: int) -> CapacitySequence:
    """Disjoint union of balls through the integer kernel."""
    radii = [as_fraction(r) for r in radii]
    L = _lcd(radii)
    ints = [int(r * L) for r in radii]

    def build(n):
        return [Fraction(v, L) for v in kernels.ball_union(ints, n)]

    return CapacitySequence("+".join(f"B({r})" for r in radii), build(K), build)


def _finite_rational(t: WeightTuple) -> None:
    if not t.is_finite() or not t.is_rational():
        raise DomainError("capacities need a finite tuple with rational entries")


def convex_capacities(t: WeightTuple, K: int, backend: Optional[str] = None) -> CapacitySequence:
    """c_0..c_K of a convex toric domain from its weight tuple."""
    _finite_rational(t)
    L = _lcd((t.b,) + t.cuts)
    B = int(t.b * L)
    ints = [int(c * L) for c in t.cuts]

    def build(n):
        return [Fraction(v, L) for v in kernels.convex_capacities_scaled(B, ints, n, backend)]

    return CapacitySequence(str(t), build(K), build)


def convex_capacity(t: WeightTuple, k: int) -> Fraction:
    return convex_capacities(t, k)[k]


# -- lattice paths -------------------------------------------------------------

def path_edges(path) -> list:
    """CCW edge vectors of the hull of a lattice point set; a segment gives two."""
    hull = convex_hull([(int(x), int(y)) for x, y in path])
    if len(hull) < 2:
        return []
    return [(hull[(i + 1) % len(hull)][0] - hull[i][0], hull[(i + 1) % len(hull)][1] - hull[i][1])
            for i in range(len(hull))]


def omega_length(poly: RationalPolygon, path) -> Fraction:
    """Omega-length of a closed convex lattice path.

    Each CCW edge e contributes max over the polygon of p_x*e_y - p_y*e_x.
    Read clockwise, this is the cross product e x p at the tangent point p.
    """
    total = Fraction(0)
    for ex, ey in path_edges(path):
        total += max(x * ey - y * ex for x, y in poly.vertices)
    return total


def concave_length(chain: Sequence, edges: Sequence) -> Fraction:
    """Length of a lattice chain against a concave region given by its boundary chain."""
    total = Fraction(0)
    for ex, ey in edges:
        total += min(ex * y - ey * x for x, y in chain)
    return total


def _linear(m, p):
    (a, b), (c, d) = m
    return (a * p[0] + b * p[1], c * p[0] + d * p[1])


def length_decomposition(poly: RationalPolygon, path) -> tuple[Fraction, Fraction]:
    """Return (direct length, triangle length minus the three concave pieces).

    Both the polygon and the path are split at the coordinate axes and the
    slant line, and each complementary piece is measured in its own chart.
    """
    from .domains import cut_decomposition

    direct = omega_length(poly, path)
    pts = [(Fraction(int(x)), Fraction(int(y))) for x, y in path]
    hull = convex_hull(pts)
    if len(hull) < 3:
        # a segment or point: fatten nothing, the identity is checked on polygons
        raise DomainError("decomposition needs a two-dimensional path")
    _, tree = cut_decomposition(poly)
    lam = RationalPolygon.from_points(hull)
    _, ltree = cut_decomposition(lam)
    total = tree.b * ltree.b
    for name in ("0", "1", "2"):
        m, _ = tree.maps[name]
        chain = tree.regions[name]
        lchain = ltree.regions[name]
        edges = [(lchain[i + 1][0] - lchain[i][0], lchain[i + 1][1] - lchain[i][1])
                 for i in range(len(lchain) - 1)]
        total -= concave_length(chain, edges)
    return direct, total


def _lattice_points_in_hull(hull) -> list:
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    n = len(hull)
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if n == 1:
                inside = (x, y) == hull[0]
            elif n == 2:
                (ax, ay), (bx, by) = hull
                inside = ((bx - ax) * (y - ay) - (by - ay) * (x - ax) == 0
                          and min(ax, bx) <= x <= max(ax, bx) and min(ay, by) <= y <= max(ay, by))
            else:
                inside = all((hull[(i + 1) % n][0] - hull[i][0]) * (y - hull[i][1])
                             - (hull[(i + 1) % n][1] - hull[i][1]) * (x - hull[i][0]) >= 0
                             for i in range(n))
            if inside:
                out.append((x, y))
    return out


def _inradius_sq_lower(poly: RationalPolygon) -> Fraction:
    n = len(poly.vertices)
    cx = sum(x for x, _ in poly.vertices) / n
    cy = sum(y for _, y in poly.vertices) / n
    best = None
    for (ax, ay), (bx, by) in poly.edges():
        nx, ny = by - ay, -(bx - ax)
        dist = nx * (ax - cx) + ny * (ay - cy)
        r2 = dist * dist / (nx * nx + ny * ny)
        best = r2 if best is None else min(best, r2)
    return best


def _greedy_upper(poly: RationalPolygon, k: int) -> Fraction:
    """Length of some convex lattice polygon with k+1 points, grown greedily."""
    best = None
    for direction in ((1, 0), (0, 1), (1, 1), (1, -1)):
        seg = [(i * direction[0], i * direction[1]) for i in range(k + 1)]
        val = omega_length(poly, seg)
        best = val if best is None else min(best, val)
    current = [(0, 0)]
    span = k + 2
    while len(current) < k + 1:
        choice = None
        for x in range(-span, span + 1):
            for y in range(-span, span + 1):
                if (x, y) in current:
                    continue
                hull = convex_hull(current + [(x, y)])
                if len(_lattice_points_in_hull(hull)) != len(current) + 1:
                    continue
                val = omega_length(poly, hull)
                if choice is None or val < choice[0]:
                    choice = (val, (x, y))
        current.append(choice[1])
    return min(best, omega_length(poly, current))


LATTICE_ORACLE_MAX_K = 10


def lattice_path_oracle(poly: RationalPolygon, k: int, max_k: int = LATTICE_ORACLE_MAX_K) -> Fraction:
    """Minimum Omega-length over convex lattice polygons with exactly k+1 lattice points.

    Exhaustive: sets are grown one point at a time from the origin, which is
    kept lexicographically least.  Every convex lattice set arises this way,
    since dropping a vertex other than the origin leaves a convex lattice set.
    Length only grows under inclusion, so branches at or above the best known
    value are cut.  Points stay within the diameter bound U/(2r) of the origin,
    with U a known length and r the inradius of the polygon about its centroid.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    if k > max_k:
        raise DomainError(f"k={k} is above the enumeration bound {max_k}")
    if k == 0:
        return Fraction(0)
    upper = _greedy_upper(poly, k)
    r2 = _inradius_sq_lower(poly)
    root = math.isqrt(math.floor(r2 * 10**6))
    r_low = Fraction(root, 1000)
    if r_low <= 0:
        raise DomainError("polygon too thin for the enumeration bound")
    radius = math.ceil(upper / (2 * r_low))
    cands = [(x, y) for x in range(0, radius + 1) for y in range(-radius, radius + 1)
             if (x, y) > (0, 0) and x * x + y * y <= radius * radius]
    best = upper
    level = {frozenset([(0, 0)])}
    for size in range(2, k + 2):
        nxt = set()
        for s in level:
            pts = list(s)
            for c in cands:
                if c in s:
                    continue
                hull = convex_hull(pts + [c])
                if len(_lattice_points_in_hull(hull)) != size:
                    continue
                key = frozenset(pts + [c])
                if key in nxt:
                    continue
                val = omega_length(poly, hull)
                if val >= best:
                    continue
                if size == k + 1:
                    best = val
                nxt.add(key)
        level = nxt
    return best


# -- subleading asymptotics -----------------------------------------------------

def _compare_ek(c1, k1, c2, k2, vol) -> int:
    """Sign of e_{k1} - e_{k2} where e_k = c_k - sqrt(2 k vol), exactly."""
    u = c1 - c2
    A, B = 2 * k1 * vol, 2 * k2 * vol
    # e1 - e2 = u + sqrt(B) - sqrt(A)
    left = RootExpr(u, 1, B)
    sl = left.sign()
    if sl <= 0:
        return -1 if (sl < 0 or A > 0) else 0
    return RootExpr(u * u + B - A, 2 * u, B).sign()


@dataclass
class SubleadingTrace:
    descriptor: str
    vol: Fraction
    capacities: list
    values: list          # float e_k for display
    zero_at: list         # k with c_k^2 == 2 k vol
    min_value: float
    min_indices: list
    max_value: float
    max_indices: list

    def to_csv(self) -> str:
        rows = ["k,e_k"] + [f"{k},{v:.12g}" for k, v in enumerate(self.values)]
        return "\n".join(rows) + "\n"

    def window_max(self, lo: int, hi: int) -> float:
        return max(self.values[lo:hi + 1])

    def window_min(self, lo: int, hi: int) -> float:
        return min(self.values[lo:hi + 1])


def subleading_from_sequence(seq: Sequence, vol, descriptor: str = "") -> SubleadingTrace:
    vol = as_fraction(vol)
    values, zeros = [], []
    lo, hi = [1], [1]
    for k in range(1, len(seq)):
        c = seq[k]
        values.append(float(c) - math.sqrt(2 * k * float(vol)))
        if c * c == 2 * k * vol:
            zeros.append(k)
        if k > 1:
            s = _compare_ek(c, k, seq[lo[0]], lo[0], vol)
            if s < 0:
                lo = [k]
            elif s == 0:
                lo.append(k)
            s = _compare_ek(c, k, seq[hi[0]], hi[0], vol)
            if s > 0:
                hi = [k]
            elif s == 0:
                hi.append(k)
    values = [float(seq[0])] + values
    return SubleadingTrace(descriptor, vol, list(seq), values, zeros,
                           values[lo[0]], lo, values[hi[0]], hi)


def subleading_trace(t: WeightTuple, K: int) -> SubleadingTrace:
    if K < 1:
        raise DomainError("K must be at least 1")
    seq = convex_capacities(t, K)
    return subleading_from_sequence(seq.values, stats(t).vol, str(t))


def partition_oracle(parts: Sequence[Sequence], k: int):
    """Brute-force max over k_1 + ... + k_n = k of sum c_{k_i}; for small k only."""
    n = len(parts)
    best = None
    for cuts in combinations(range(k + n - 1), n - 1):
        prev, split = -1, []
        for c in cuts:
            split.append(c - prev - 1)
            prev = c
        split.append(k + n - 2 - prev)
        val = sum(p[i] for p, i in zip(parts, split))
        best = val if best is None else max(best, val)
    return best
