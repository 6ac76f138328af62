"""Certified lower bounds for the ellipsoid embedding function c(z) of a target.

Three sources feed the bound at each z: the volume curve sqrt(z/Vol), ratios
of ECH capacities c_k(E(1,z))/c_k(target), and obstruction classes mu_E(z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .classes import ObstructionClass, denominator, enumerate_classes, gromov_no_staircase, numerator
from .domains import DomainError, DomainStats, WeightTuple, fibonacci, stats, volume_constraint
from .ech import convex_capacities, ellipsoid_capacities
from .exactnum import format_number, sign, simplify


def ech_lower(target: WeightTuple, z, K: int, target_caps=None):
    """max over 1 <= k <= K of c_k(E(1,z)) / c_k(target); exact."""
    if K < 1:
        raise DomainError("K must be at least 1")
    z = simplify(z)
    if sign(z - 1) < 0:
        raise DomainError("z must be at least 1")
    caps = target_caps if target_caps is not None else convex_capacities(target, K)
    ell = ellipsoid_capacities(1, z, K)
    best = Fraction(0)
    for k in range(1, K + 1):
        ck = caps[k]
        if ck == 0:
            continue
        r = simplify(ell[k] / ck)
        if sign(r - best) > 0:
            best = r
    return best


def class_lower(target: WeightTuple, z, classes: Iterable[ObstructionClass]):
    """max(V(z), mu_E(z) over the classes); returned as (value, winner).

    ``value`` is exact; when the volume curve wins it is returned as the
    :class:`VolumeConstraint` itself, since sqrt(z/Vol) may leave the field.
    Ties go to the piece with the larger right slope, the one that continues
    past z.
    """
    vc = volume_constraint(target, z)
    best, tied = vc, []
    for c in classes:
        lam = denominator(c, target)
        if sign(lam) <= 0:
            continue
        mu = simplify(numerator(c, z) / lam)
        if _beats(mu, best):
            best, tied = mu, [c]
        elif tied and sign(mu - best) == 0:
            tied.append(c)
        elif not tied and vc.compare(mu) == 0:
            best, tied = mu, [c]
    if not tied:
        return vc, None
    slope, winner = max(((_right_slope(c, target, z), c) for c in tied), key=lambda sc: _Key(sc[0]))
    if vc.compare(best) == 0 and _volume_slope_wins(slope, z, vc.vol):
        return vc, None
    return best, winner


class _Key:
    """Exact ordering for mixed Fraction/Surd slopes."""

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return sign(self.x - other.x) < 0


def _volume_slope_wins(slope, z, vol) -> bool:
    # d/dz sqrt(z/Vol) = 1/(2 sqrt(z Vol)); it beats slope s iff s < 0 or 4 s^2 z Vol < 1
    if sign(slope) < 0:
        return True
    return sign(1 - 4 * slope * slope * z * vol) > 0


def _beats(x, best) -> bool:
    if hasattr(best, "compare"):
        return best.compare(x) > 0
    return sign(x - best) > 0


def _as_float(x) -> float:
    return float(x)


def _slope_step(c: ObstructionClass) -> Fraction:
    # breakpoints of m.w(z) sit at rationals of weight length <= len(m); those
    # have denominators <= F(len+1), so they are at least 1/F^2 apart
    f = fibonacci(len(c.m) + 2)
    return Fraction(1, 4 * f * f)


def _right_slope(c: ObstructionClass, target: WeightTuple, z):
    h = _slope_step(c)
    lam = denominator(c, target)
    return simplify((numerator(c, z + h) - numerator(c, z)) / (h * lam))


@dataclass
class EmbedFnSample:
    z: Fraction
    ech_lower: object
    class_lower: object
    volume: tuple      # (z, Vol)
    best: float
    source: str        # "volume", "ech" or the winning class
    piece: tuple       # identifies the local smooth piece of the bound
    corner: bool = False

    def csv_row(self) -> str:
        vol = math.sqrt(float(self.volume[0]) / float(self.volume[1]))
        cl = self.class_lower
        cl_text = f"{vol!r}" if hasattr(cl, "compare") else format_number(cl)
        return f"{self.z},{format_number(self.ech_lower)},{cl_text},{vol!r},{self.best!r}"


def _sample(target, z, K, classes, caps) -> EmbedFnSample:
    z = simplify(z)
    st = stats(target)
    e = ech_lower(target, z, K, caps) if K else Fraction(0)
    cl, winner = class_lower(target, z, classes)
    vc = volume_constraint(target, z)
    if winner is None:
        best_val, source, piece = vc, "volume", ("volume",)
    else:
        best_val, source = cl, str(winner)
        piece = ("class", str(winner), _right_slope(winner, target, z))
    # the ECH ratio is a lower bound but not part of the piecewise reconstruction
    if _beats(e, best_val):
        best_val, source = e, "ech"
    return EmbedFnSample(z, e, cl, (z, st.vol), float(best_val), source, piece)


def scan(target: WeightTuple, z_grid: Sequence, K: int, d_max: int,
         classes: Optional[list] = None) -> list[EmbedFnSample]:
    """Bounds on a grid, flagging a corner between consecutive samples whose
    dominant class pieces (class and exact right slope) differ."""
    if classes is None:
        classes = enumerate_classes(target, d_max, obstructive_only=True)
    caps = convex_capacities(target, K) if K else None
    out = []
    for z in sorted(simplify(z) for z in z_grid):
        s = _sample(target, z, K, classes, caps)
        if out and s.piece != out[-1].piece:
            s.corner = True
        out.append(s)
    return out


def corners(samples: Sequence[EmbedFnSample]) -> list:
    return [s.z for s in samples if s.corner]


def scan_csv(samples: Sequence[EmbedFnSample]) -> str:
    lines = ["z,ech_lower,class_lower,volume,best"] + [s.csv_row() for s in samples]
    return "\n".join(lines) + "\n"


@dataclass
class AccumulationReport:
    descriptor: str
    a0: object
    v_a0: object
    bound: object
    source: str
    exceeds_volume: Optional[bool]
    verdict: str
    trace: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is None else format_number(x)
        return {"target": self.descriptor, "a0": fmt(self.a0),
                "a0_float": None if self.a0 is None else float(self.a0),
                "V_a0": fmt(self.v_a0), "bound": fmt(self.bound), "source": self.source,
                "exceeds_volume": self.exceeds_volume, "verdict": self.verdict,
                "trace": {k: (fmt(v) if not isinstance(v, (bool, str, int, type(None))) else v)
                          for k, v in self.trace.items()}}


def accumulation_report(target: Union[WeightTuple, DomainStats], K: int = 0, d_max: int = 0,
                        gromov_width=None) -> AccumulationReport:
    """Best lower bound at a0 against V(a0).

    A bound strictly above V(a0) means a0 is obstructed, which rules out a
    staircase.  A bound equal to V(a0) decides nothing.  A Gromov-width upper
    bound w contributes 1/w, because E(1,z) contains the unit ball.
    """
    st = stats(target)
    desc = str(target) if isinstance(target, WeightTuple) else f"Per={st.per}, Vol={st.vol}"
    trace = {"per": st.per, "vol": st.vol}
    if gromov_width is not None:
        trace["gromov_predicate"] = gromov_no_staircase(st, gromov_width)
    if st.a0 is None:
        return AccumulationReport(desc, None, None, None, "none", None,
                                  "no accumulation point: Per^2 < 4 Vol", trace)
    a0 = st.a0
    vc = volume_constraint(st, a0)
    v_exact = vc.exact()
    best, source = vc, "volume"
    if gromov_width is not None:
        g = simplify(1 / simplify(gromov_width))
        trace["gromov_bound"] = g
        if _beats(g, best):
            best, source = g, "gromov width"
    if isinstance(target, WeightTuple):
        if K:
            e = ech_lower(target, a0, K)
            trace["ech_lower"] = e
            if _beats(e, best):
                best, source = e, f"ech k<={K}"
        if d_max:
            cl, winner = class_lower(target, a0, enumerate_classes(target, d_max))
            if winner is not None:
                trace["class_lower"] = cl
                trace["class"] = str(winner)
                if _beats(cl, best):
                    best, source = cl, str(winner)
    exceeds = source != "volume"
    if exceeds:
        # exact witness: bound^2 * Vol - a0 > 0
        trace["excess_sq"] = simplify(best * best * st.vol - a0)
    verdict = ("a0 is obstructed: no staircase" if exceeds
               else "bound equals V(a0): a staircase is not excluded")
    bound = best if not hasattr(best, "compare") else v_exact
    return AccumulationReport(desc, a0, v_exact, bound, source, exceeds, verdict, trace)


def fuzzy_polydisc_stats(b, eps, vol_excess=None) -> DomainStats:
    """Per = 2b + 1 + eps and Vol = 2b + eps + vol_excess, vol_excess in (0, eps)."""
    b, eps = simplify(b), simplify(eps)
    if vol_excess is None:
        vol_excess = eps / 2
    if sign(b - 1) < 0 or sign(eps) <= 0 or not (0 < vol_excess < eps):
        raise DomainError("need b >= 1, eps > 0 and 0 < vol_excess < eps")
    return DomainStats.from_values(2 * b + 1 + eps, 2 * b + eps + vol_excess)


def ball_grid(n: int = 50) -> list[Fraction]:
    """Midpoints of n equal cells of [1, 1 + n*117/1000], all below tau^4."""
    return [1 + (i + Fraction(1, 2)) * Fraction(117, 1000) for i in range(n)]


def obstructed_fraction(target: WeightTuple, grid: Sequence, d_max: int) -> tuple[int, int]:
    """(# grid points where some class with d <= d_max beats V strictly, # points)."""
    classes = enumerate_classes(target, d_max, obstructive_only=True)
    hits = sum(1 for z in grid if class_lower(target, z, classes)[1] is not None)
    return hits, len(grid)
