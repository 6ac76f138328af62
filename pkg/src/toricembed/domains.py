"""Convex toric domains: negative weight tuples, the cutting algorithm, perimeter,
volume, accumulation point, affine lengths and singularity orders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .exactnum import (
    Surd,
    as_fraction,
    field_sqrt,
    format_number,
    parse_number,
    parse_rational,
    sign,
    simplify,
)
from .weights import weights_of

Point = tuple[Fraction, Fraction]


class DomainError(ValueError):
    """Input that does not describe a valid domain."""


# -- weight tuples -------------------------------------------------------------

@dataclass(frozen=True)
class WeightTuple:
    """``(b; b_1, ..., b_N)``: the triangle T(b) with corner triangles of sizes b_j removed.

    ``tail_sum`` and ``tail_sq`` carry the sum and sum of squares of cuts left out
    of a truncated infinite tuple, so perimeter and volume stay exact.
    """

    b: object
    cuts: tuple = ()
    tail_sum: object = Fraction(0)
    tail_sq: object = Fraction(0)

    def __post_init__(self):
        b = simplify(self.b)
        cuts = tuple(sorted((simplify(c) for c in self.cuts), reverse=True))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "tail_sum", simplify(self.tail_sum))
        object.__setattr__(self, "tail_sq", simplify(self.tail_sq))
        if sign(b) <= 0:
            raise DomainError("b must be positive")
        if any(sign(c) <= 0 for c in cuts):
            raise DomainError("cuts must be positive")
        sq = sum((c * c for c in cuts), Fraction(0)) + self.tail_sq
        tot = sum(cuts, Fraction(0)) + self.tail_sum
        if sign(b * b - sq) <= 0:
            raise DomainError("sum of squared cuts must be below b^2")
        if sign(3 * b - tot) < 0:
            raise DomainError("sum of cuts must be at most 3b")
        if len(cuts) >= 2 and sign(b - cuts[0] - cuts[1]) < 0:
            raise DomainError("the two largest cuts must fit: b1 + b2 <= b")

    @classmethod
    def parse(cls, text: str) -> "WeightTuple":
        """Accept ``"b : b1 b2 ..."`` or ``"b:b1,b2"``."""
        if ":" not in text:
            raise DomainError(f"weight tuple needs 'b : cuts', got {text!r}")
        head, tail = text.split(":", 1)
        parts = [s for s in tail.replace(",", " ").split() if s]
        try:
            return cls(parse_number(head), tuple(parse_number(s) for s in parts))
        except ValueError as exc:
            raise DomainError(str(exc)) from exc

    def scaled(self, lam) -> "WeightTuple":
        return WeightTuple(self.b * lam, tuple(c * lam for c in self.cuts),
                           self.tail_sum * lam, self.tail_sq * lam * lam)

    def is_finite(self) -> bool:
        return sign(self.tail_sq) == 0 and sign(self.tail_sum) == 0

    def is_rational(self) -> bool:
        return all(not isinstance(x, Surd) for x in (self.b,) + self.cuts)

    def __str__(self):
        body = " ".join(format_number(c) for c in self.cuts)
        return f"{format_number(self.b)} : {body}".rstrip()


def ball(a=1) -> WeightTuple:
    return WeightTuple(as_fraction(a))


def irrational_ellipsoid_tuple(alpha: Surd, n_cuts: int) -> WeightTuple:
    """(alpha; alpha-1, w(alpha-1)) truncated to ``n_cuts`` cuts, with exact tails.

    For irrational x, the full weight expansion has sum x + 1 and square sum x.
    """
    x = alpha - 1
    if x <= 0:
        raise DomainError("need alpha > 1")
    cuts = [x] + weights_of(x, n_cuts - 1)
    cuts = [c for c in cuts if c != 0]
    total = x + (x + 1)
    total_sq = x * x + x
    return WeightTuple(alpha, tuple(cuts), total - sum(cuts, Fraction(0)),
                       total_sq - sum((c * c for c in cuts), Fraction(0)))


# -- stats ------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainStats:
    per: object
    vol: object
    a0: Optional[object]

    @classmethod
    def from_values(cls, per, vol) -> "DomainStats":
        per, vol = simplify(per), simplify(vol)
        return cls(per, vol, accumulation_point(per, vol))


def accumulation_point(per, vol):
    """Larger root of z^2 - (Per^2/Vol - 2) z + 1, or ``None`` when Per^2 < 4 Vol."""
    if sign(per * per - 4 * vol) < 0:
        return None
    c = per * per / vol - 2
    root = field_sqrt(c * c - 4)
    if root is None:
        raise DomainError("accumulation point leaves the quadratic field of the data")
    return simplify((c + root) / 2)


def stats(t: Union[WeightTuple, DomainStats]) -> DomainStats:
    if isinstance(t, DomainStats):
        return t
    per = 3 * t.b - sum(t.cuts, Fraction(0)) - t.tail_sum
    vol = t.b * t.b - sum((c * c for c in t.cuts), Fraction(0)) - t.tail_sq
    return DomainStats.from_values(per, vol)


@dataclass(frozen=True)
class VolumeConstraint:
    """V(z) = sqrt(z/Vol), kept as the pair (z, Vol) for exact comparisons."""

    z: object
    vol: object

    def squared(self):
        return simplify(self.z / self.vol)

    def compare(self, x) -> int:
        """Sign of ``x - V(z)``."""
        sx = sign(x)
        if sx <= 0:
            return -1
        return sign(x * x - self.squared())

    def exact(self):
        """V(z) as a surd when the square root stays in a quadratic field, else ``None``."""
        return field_sqrt(self.squared())

    def __float__(self):
        return math.sqrt(float(self.squared()))


def volume_constraint(t, z) -> VolumeConstraint:
    return VolumeConstraint(simplify(z), stats(t).vol)


# -- polygons ---------------------------------------------------------------------

def _cross(o: Point, a: Point, b: Point):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counterclockwise hull without collinear vertices (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class RationalPolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple((as_fraction(x), as_fraction(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise DomainError("a polygon needs at least three vertices")
        if any(x < 0 or y < 0 for x, y in verts):
            raise DomainError("polygon must lie in the closed positive quadrant")
        n = len(verts)
        for i in range(n):
            if _cross(verts[i - 1], verts[i], verts[(i + 1) % n]) <= 0:
                raise DomainError("polygon must be strictly convex and counterclockwise")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "RationalPolygon":
        hull = convex_hull((as_fraction(x), as_fraction(y)) for x, y in points)
        return cls(tuple(hull))

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def translated(self, dx, dy) -> "RationalPolygon":
        return RationalPolygon(tuple((x + dx, y + dy) for x, y in self.vertices))

    def area2(self) -> Fraction:
        """Twice the area (shoelace)."""
        return sum((a[0] * b[1] - a[1] * b[0] for a, b in self.edges()), Fraction(0))


def parse_polygon(text: str) -> RationalPolygon:
    pts = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"expected 'x y', got {raw!r}")
        try:
            pts.append((parse_rational(parts[0]), parse_rational(parts[1])))
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
    return RationalPolygon.from_points(pts)


def read_polygon(path) -> RationalPolygon:
    with open(path, encoding="utf-8") as fh:
        return parse_polygon(fh.read())


def primitive_direction(dx, dy) -> tuple[int, int, Fraction]:
    """Return ``(u, v, t)`` with (dx, dy) = t * (u, v) and (u, v) primitive integral."""
    dx, dy = as_fraction(dx), as_fraction(dy)
    if dx == 0 and dy == 0:
        raise DomainError("degenerate segment")
    den = math.lcm(dx.denominator, dy.denominator)
    X, Y = int(dx * den), int(dy * den)
    g = math.gcd(X, Y)
    return X // g, Y // g, Fraction(g, den)


def affine_length(p0: Sequence, p1: Sequence) -> Fraction:
    """Affine length of a segment with rational endpoints."""
    if any(isinstance(c, float) for c in (*p0, *p1)):
        raise DomainError("floating point endpoints are not exact rationals")
    return primitive_direction(as_fraction(p1[0]) - as_fraction(p0[0]),
                               as_fraction(p1[1]) - as_fraction(p0[1]))[2]


def boundary_perimeter(poly: RationalPolygon) -> Fraction:
    return sum((affine_length(a, b) for a, b in poly.edges()), Fraction(0))


def _outward_normal(a: Point, b: Point) -> tuple[int, int]:
    u, v, _ = primitive_direction(b[0] - a[0], b[1] - a[1])
    return v, -u


def singularity_order(poly: RationalPolygon, i: int) -> int:
    """|det| of the primitive outward normals of the two edges at vertex i."""
    v = poly.vertices
    n = len(v)
    n1 = _outward_normal(v[i - 1], v[i])
    n2 = _outward_normal(v[i], v[(i + 1) % n])
    return abs(n1[0] * n2[1] - n1[1] * n2[0])


def fibonacci(k: int) -> int:
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def cut_length_lower_bound(o: int) -> int:
    """Smallest k with 8 F_k^2 >= o (F_0 = F_1 = 1)."""
    if o < 1:
        raise ValueError("singularity order is at least 1")
    k = 0
    while 8 * fibonacci(k) ** 2 < o:
        k += 1
    return k


# -- cutting algorithm ---------------------------------------------------------

@dataclass
class CutNode:
    """One removed triangle of size ``size``.

    ``transform`` is the unimodular affine map (matrix, offset) taking the
    parent's coordinates to this piece's corner-at-origin coordinates.
    """

    size: Fraction
    transform: tuple
    children: list = field(default_factory=list)

    def sizes(self) -> list[Fraction]:
        out = [self.size]
        for ch in self.children:
            if ch is not None:
                out.extend(ch.sizes())
        return out

    def check_nesting(self) -> bool:
        kids = [c.size for c in self.children if c is not None]
        ok = sum(kids, Fraction(0)) <= self.size
        return ok and all(c.check_nesting() for c in self.children if c is not None)


@dataclass
class CutTree:
    b: Fraction
    offset: Point
    regions: dict  # name -> concave chain in local coordinates
    maps: dict     # name -> (matrix, offset) from the translated polygon
    roots: dict    # name -> CutNode or None

    def sizes(self) -> list[Fraction]:
        out = []
        for name in ("0", "1", "2"):
            node = self.roots.get(name)
            if node is not None:
                out.extend(node.sizes())
        return out

    def check_nesting(self) -> bool:
        return all(n.check_nesting() for n in self.roots.values() if n is not None)


def _apply(m, off, p: Point) -> Point:
    (a, b), (c, d) = m
    return (a * p[0] + b * p[1] + off[0], c * p[0] + d * p[1] + off[1])


def _concave_empty(chain: list[Point]) -> bool:
    y0 = chain[0][1]
    x1 = chain[-1][0]
    return y0 == 0 or x1 == 0


def _cut_concave(chain: list[Point]) -> Optional[CutNode]:
    """Recursively cut a concave region given by its upper chain (y-axis to x-axis)."""
    if _concave_empty(chain):
        return None
    a = min(x + y for x, y in chain)
    touching = [i for i, (x, y) in enumerate(chain) if x + y == a]
    first, last = touching[0], touching[-1]
    m1, o1 = ((1, 0), (1, 1)), (Fraction(0), -a)
    m2, o2 = ((1, 1), (0, 1)), (-a, Fraction(0))
    left = [_apply(m1, o1, p) for p in chain[: first + 1]]
    right = [_apply(m2, o2, p) for p in chain[last:]]
    node = CutNode(a, (None, None))
    for part, m, o in ((left, m1, o1), (right, m2, o2)):
        child = _cut_concave(part)
        if child is not None:
            child.transform = (m, o)
        node.children.append(child)
    return node


def _ccw_path(verts: Sequence[Point], i: int, j: int) -> list[Point]:
    n = len(verts)
    out = [verts[i]]
    while i != j:
        i = (i + 1) % n
        out.append(verts[i])
    return out


def cut_decomposition(poly: RationalPolygon) -> tuple[WeightTuple, CutTree]:
    """Negative weight tuple of a rational convex polygon, with its cut tree."""
    dx = -min(x for x, _ in poly.vertices)
    dy = -min(y for _, y in poly.vertices)
    P = poly.translated(dx, dy)
    v = P.vertices
    b = max(x + y for x, y in v)
    idx = range(len(v))
    slant = [i for i in idx if v[i][0] + v[i][1] == b]
    yaxis = [i for i in idx if v[i][0] == 0]
    xaxis = [i for i in idx if v[i][1] == 0]
    s_left = min(slant, key=lambda i: v[i][0])
    s_right = max(slant, key=lambda i: v[i][0])
    y_top = max(yaxis, key=lambda i: v[i][1])
    y_bot = min(yaxis, key=lambda i: v[i][1])
    x_left = min(xaxis, key=lambda i: v[i][0])
    x_right = max(xaxis, key=lambda i: v[i][0])
    maps = {
        "0": (((1, 0), (0, 1)), (Fraction(0), Fraction(0))),
        "1": (((-1, -1), (1, 0)), (b, Fraction(0))),
        "2": (((0, 1), (-1, -1)), (Fraction(0), b)),
    }
    paths = {"0": (y_bot, x_left), "1": (s_left, y_top), "2": (x_right, s_right)}
    regions, roots = {}, {}
    for name, (i, j) in paths.items():
        m, o = maps[name]
        chain = [_apply(m, o, p) for p in _ccw_path(v, i, j)]
        regions[name] = chain
        node = _cut_concave(chain)
        if node is not None:
            node.transform = (m, o)
        roots[name] = node
    tree = CutTree(b, (dx, dy), regions, maps, roots)
    return WeightTuple(b, tuple(tree.sizes())), tree


def polygon_of_tuple_simple(t: WeightTuple) -> RationalPolygon:
    """Polygon for a tuple whose cuts sit at the three corners of T(b).

    Supports at most three cuts (one per corner), each cut a unimodular corner
    triangle: corner (0,0) uses cut 3, corners (b,0) and (0,b) use cuts 1 and 2.
    """
    if len(t.cuts) > 3 or not t.is_rational():
        raise DomainError("only up to three rational corner cuts are supported")
    b = t.b
    c = list(t.cuts) + [Fraction(0)] * (3 - len(t.cuts))
    c1, c2, c3 = c
    pts = [(c3, Fraction(0)), (b - c1, Fraction(0)), (b - c1, c1),
           (c2, b - c2), (Fraction(0), b - c2), (Fraction(0), c3)]
    return RationalPolygon.from_points(pts)
