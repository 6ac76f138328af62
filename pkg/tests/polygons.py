"""Random rational convex polygons shared by several test modules."""

import random
from fractions import Fraction

from toricembed.domains import DomainError, RationalPolygon, convex_hull


def random_polygon(rng: random.Random, max_vertices: int = 7, bound: int = 10, den: int = 4):
    while True:
        pts = {(Fraction(rng.randint(0, bound * den), den), Fraction(rng.randint(0, bound * den), den))
               for _ in range(rng.randint(3, 9))}
        hull = convex_hull(pts)
        if 3 <= len(hull) <= max_vertices:
            try:
                return RationalPolygon(tuple(hull))
            except DomainError:
                continue


def random_polygons(seed: int, count: int, **kw):
    rng = random.Random(seed)
    return [random_polygon(rng, **kw) for _ in range(count)]
