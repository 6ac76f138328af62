"""Obstruction classes (d; m~; m): Diophantine checks, obstruction functions,
break points, obstructiveness, liveness, error vectors and enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .domains import DomainError, DomainStats, WeightTuple, stats
from .exactnum import RootExpr, Surd, as_fraction, format_number, sign, simplify
from .weights import integral_weights, weights_of


def _ordered(xs) -> tuple[int, ...]:
    return tuple(sorted((int(x) for x in xs), reverse=True))


@dataclass(frozen=True)
class ObstructionClass:
    d: int
    mtilde: tuple[int, ...] = ()
    m: tuple[int, ...] = ()

    def __post_init__(self):
        if self.d < 0:
            raise DomainError("degree must be nonnegative")
        mt = _ordered(self.mtilde)
        m = _ordered(self.m)
        if any(x < 0 for x in mt + m):
            raise DomainError("class entries must be nonnegative")
        object.__setattr__(self, "mtilde", tuple(x for x in mt if x))
        object.__setattr__(self, "m", tuple(x for x in m if x))

    @classmethod
    def parse(cls, text: str) -> "ObstructionClass":
        """``"d; m~1,m~2,... | m1,m2,..."``."""
        try:
            head, rest = text.split(";", 1)
            left, _, right = rest.partition("|")
            ints = lambda s: tuple(int(x) for x in s.replace(",", " ").split())
            return cls(int(head), ints(left), ints(right))
        except ValueError as exc:
            raise DomainError(f"cannot parse class {text!r}") from exc

    def c1(self) -> int:
        return 3 * self.d - sum(self.mtilde) - sum(self.m)

    def self_intersection(self) -> int:
        return self.d ** 2 - sum(x * x for x in self.mtilde) - sum(x * x for x in self.m)

    def center(self) -> Optional[Fraction]:
        """p/q when m = W(p,q), else ``None``."""
        if not self.m:
            return None
        q = self.m[0]
        p = sum(self.m) - q + 1
        if p < q or math.gcd(p, q) != 1:
            return None
        return Fraction(p, q) if integral_weights(p, q) == self.m else None

    def __str__(self):
        return f"{self.d}; {','.join(map(str, self.mtilde))} | {','.join(map(str, self.m))}"


def check_diophantine(c: ObstructionClass) -> bool:
    return c.c1() == 1 and c.self_intersection() == -1


@dataclass(frozen=True)
class QuasiPerfectClass:
    d: int
    mtilde: tuple[int, ...]
    p: int
    q: int

    def as_class(self) -> ObstructionClass:
        return ObstructionClass(self.d, self.mtilde, integral_weights(self.p, self.q))

    def check(self) -> bool:
        mt = self.mtilde
        return (3 * self.d - sum(mt) == self.p + self.q
                and self.d ** 2 - sum(x * x for x in mt) == self.p * self.q - 1)


def perfect_pq_class(p: int, q: int) -> ObstructionClass:
    """(p; W(p, p-q), 1; W(p, q))."""
    if p == q:
        return ObstructionClass(1, (1,), (1,))
    return ObstructionClass(p, integral_weights(p, p - q) + (1,), integral_weights(p, q))


def e_prime(k: int) -> ObstructionClass:
    """(k; k-1, 1 x (k-1); 1 x (k+1)), the class for E(1, alpha) with k < alpha < k+1."""
    return ObstructionClass(k, (k - 1,) + (1,) * (k - 1), (1,) * (k + 1))


# -- obstruction function -----------------------------------------------------------

def _cuts_for(c: ObstructionClass, target: WeightTuple) -> list:
    n = len(c.mtilde)
    if n > len(target.cuts):
        if not target.is_finite():
            raise DomainError("class reaches past the truncated cuts of the target")
        return list(target.cuts) + [Fraction(0)] * (n - len(target.cuts))
    return list(target.cuts[:n])


def denominator(c: ObstructionClass, target: WeightTuple):
    """lambda = d*b - m~ . b."""
    cuts = _cuts_for(c, target)
    return simplify(c.d * target.b - sum((m * b for m, b in zip(c.mtilde, cuts)), Fraction(0)))


def numerator(c: ObstructionClass, z):
    a = weights_of(z, len(c.m))
    return simplify(sum((m * x for m, x in zip(c.m, a)), Fraction(0)))


def mu_at(c: ObstructionClass, target: WeightTuple, z):
    lam = denominator(c, target)
    if sign(lam) <= 0:
        raise DomainError(f"class {c} has nonpositive denominator on {target}")
    return simplify(numerator(c, z) / lam)


def _excess_sign(mu, z, vol) -> int:
    """Sign of mu - sqrt(z/vol) for mu >= 0."""
    if sign(mu) <= 0:
        return -1
    return sign(mu * mu * vol - z)


def _is_obstructive_at(c, target, z, lam, vol) -> bool:
    return _excess_sign(simplify(numerator(c, z) / lam), z, vol) > 0


def rationals_of_weight_length(n: int) -> Iterator[Fraction]:
    """All z >= 1 whose weight expansion has exactly n entries."""
    def tails(budget):
        # continued fraction tails [a1, ..., ak] with sum == budget, last entry >= 2
        if budget == 0:
            yield []
            return
        for a in range(1, budget + 1):
            rest = budget - a
            if rest == 0:
                if a >= 2:
                    yield [a]
            else:
                for t in tails(rest):
                    yield [a] + t

    from .weights import cf_value
    for a0 in range(1, n + 1):
        if a0 == n:
            yield Fraction(a0)
            continue
        for t in tails(n - a0):
            yield cf_value([a0] + t)


def break_point(c: ObstructionClass, target: WeightTuple) -> Fraction:
    """The center p/q when m = W(p,q) and the class is obstructive there; otherwise
    the most obstructed rational among those with as many weights as m has entries."""
    vol = stats(target).vol
    lam = denominator(c, target)
    if sign(lam) <= 0 or not c.m:
        raise DomainError(f"class {c} is nowhere obstructive")
    center = c.center()
    if center is not None and _is_obstructive_at(c, target, center, lam, vol):
        return center
    best, best_ratio = None, None
    for z in rationals_of_weight_length(len(c.m)):
        mu = simplify(numerator(c, z) / lam)
        if _excess_sign(mu, z, vol) <= 0:
            continue
        ratio = simplify(mu * mu * vol / z)
        if best is None or sign(ratio - best_ratio) > 0:
            best, best_ratio = z, ratio
    if best is None:
        raise DomainError(f"class {c} is nowhere obstructive")
    return best


def is_obstructive(c: ObstructionClass, target: WeightTuple, z=None) -> bool:
    """Obstructive at z, or at its break point when z is omitted."""
    lam = denominator(c, target)
    if sign(lam) <= 0 or not c.m:
        return False
    vol = stats(target).vol
    if z is not None:
        return _is_obstructive_at(c, target, z, lam, vol)
    try:
        break_point(c, target)
    except DomainError:
        return False
    return True


def is_live(c: ObstructionClass, target: WeightTuple, competitors: Iterable[ObstructionClass],
            z, strict: bool = False) -> bool:
    """mu_c(z) above the volume constraint and at least every competitor's mu.

    With ``strict`` a tie with a competitor counts as overshadowed.
    """
    vol = stats(target).vol
    lam = denominator(c, target)
    if sign(lam) <= 0:
        return False
    mu = simplify(numerator(c, z) / lam)
    if _excess_sign(mu, z, vol) <= 0:
        return False
    for other in competitors:
        if other == c:
            continue
        lo = denominator(other, target)
        if sign(lo) <= 0:
            continue
        diff = sign(mu - numerator(other, z) / lo)
        if diff < 0 or (strict and diff == 0):
            return False
    return True


# -- error vector and bounds -----------------------------------------------------------

@dataclass(frozen=True)
class ErrorVector:
    """eps = m_E - (d/(lambda_a b)) w, with lambda_a = sqrt(a/Vol).

    ``dot`` is eps.eps as r + s*sqrt(Vol/a); the components are irrational in
    general and only offered as floats.
    """

    cls: ObstructionClass
    a: Fraction
    dot: RootExpr
    scale_inv_sq: object   # (lambda_a b / d)^2
    w_rational: tuple      # (b_j; a_i * sqrt(Vol/a)) split as b_j and a_i

    def components(self) -> list[float]:
        lam = math.sqrt(float(self.a) / float(self.dot.t)) if float(self.dot.t) else 0.0
        k = self.cls.d / (lam * float(self.w_rational[0]))
        cuts, ai = self.w_rational[1], self.w_rational[2]
        mt = list(self.cls.mtilde) + [0] * (len(cuts) - len(self.cls.mtilde))
        m = list(self.cls.m) + [0] * (len(ai) - len(self.cls.m))
        out = [x - k * lam * float(b) for x, b in zip(mt, cuts)]
        out += [x - k * float(y) for x, y in zip(m, ai)]
        return out

    def below_one(self) -> bool:
        return self.dot.compare(1) < 0


def error_vector(c: ObstructionClass, target: WeightTuple, a) -> ErrorVector:
    a = as_fraction(a)
    st = stats(target)
    b = target.b
    cuts = _cuts_for(c, target)
    mtb = simplify(sum((m * x for m, x in zip(c.mtilde, cuts)), Fraction(0)))
    ai = weights_of(a)
    ma = sum((m * x for m, x in zip(c.m, ai)), Fraction(0))
    norm = sum(x * x for x in c.mtilde) + sum(x * x for x in c.m)
    r = simplify(norm + c.d * c.d - 2 * c.d * mtb / b)
    s = simplify(-2 * c.d * ma / b)
    t = simplify(st.vol / a)
    return ErrorVector(c, a, RootExpr(r, s, t), simplify((a / st.vol) * b * b / (c.d * c.d)),
                       (b, tuple(target.cuts), tuple(ai)))


@dataclass(frozen=True)
class MuBound:
    """Upper bound for mu at a break point, kept squared."""

    squared: object

    def __float__(self):
        return math.sqrt(float(self.squared))

    def dominates(self, x) -> bool:
        """True when x <= bound."""
        return sign(x) <= 0 or sign(self.squared - x * x) >= 0


def mu_upper_bound(c: ObstructionClass, target, z=None) -> MuBound:
    if z is None:
        z = break_point(c, target)
    st = stats(target)
    b = target.b
    sumsq = simplify(b * b - st.vol)
    den = simplify(b * b * Fraction(c.d * c.d, c.d * c.d + 1) - sumsq)
    if sign(den) <= 0:
        raise DomainError("degenerate bound: b^2 d^2/(d^2+1) <= sum of squared cuts")
    return MuBound(simplify(Surd.lift(z) / den))


def m_bound_holds(c: ObstructionClass, target: WeightTuple) -> bool:
    """(M - d)^2 <= 1/|b|^2 - 1 where m~ = M b + (orthogonal part), normalised b = 1."""
    cuts = [x / target.b for x in _cuts_for(c, target)]
    bb = sum((x * x for x in target.cuts), Fraction(0)) / (target.b * target.b)
    if sign(bb) == 0:
        return True
    M = sum((m * x for m, x in zip(c.mtilde, cuts)), Fraction(0)) / bb
    return sign(1 / bb - 1 - (M - c.d) ** 2) >= 0


# -- enumeration ----------------------------------------------------------------------

def _nonincreasing(total: int, sq: int, cap: int, max_len: Optional[int]) -> Iterator[tuple]:
    """Nonincreasing positive tuples with given sum and square sum, entries <= cap."""
    if total == 0:
        if sq == 0:
            yield ()
        return
    if max_len == 0 or sq <= 0:
        return
    for x in range(min(cap, total, math.isqrt(sq)), 0, -1):
        # remaining entries are each <= x, so sum of squares <= x * sum
        if sq > x * total:
            break
        if x * x > sq:
            continue
        for rest in _nonincreasing(total - x, sq - x * x, x, None if max_len is None else max_len - 1):
            yield (x,) + rest


def enumerate_classes(target: WeightTuple, d_max: int, obstructive_only: bool = False,
                      d_min: int = 1) -> list[ObstructionClass]:
    """Ordered quasi-exceptional classes with d_min <= d <= d_max, m~ fitting the cuts."""
    n_cuts = len(target.cuts)
    out = []
    for d in range(d_min, d_max + 1):
        total, sq = 3 * d - 1, d * d + 1
        for t_sum in range(0, total + 1):
            for t_sq in range(t_sum, sq + 1):
                for mt in _nonincreasing(t_sum, t_sq, d, n_cuts):
                    for m in _nonincreasing(total - t_sum, sq - t_sq, d, None):
                        c = ObstructionClass(d, mt, m)
                        if obstructive_only and not is_obstructive(c, target):
                            continue
                        out.append(c)
    return out


# -- no-staircase criterion ----------------------------------------------------------

def gromov_no_staircase(target: Union[WeightTuple, DomainStats], gromov_bound) -> bool:
    """Per < d + Vol/d with d^2 <= Vol, for a Gromov-width upper bound d."""
    st = stats(target)
    d = simplify(gromov_bound)
    if sign(d) <= 0:
        raise DomainError("Gromov width bound must be positive")
    return sign(d + st.vol / d - st.per) > 0 and sign(st.vol - d * d) >= 0


def class_report(c: ObstructionClass, target: WeightTuple, competitors=()) -> dict:
    """JSON-ready summary of one class on one target."""
    st = stats(target)
    out = {"d": c.d, "mtilde": list(c.mtilde), "m": list(c.m), "center": None,
           "mu_at_center": None, "volume_at_center": None, "obstructive": False, "live": False}
    try:
        z = break_point(c, target)
    except DomainError:
        return out
    mu = mu_at(c, target, z)
    out.update(center=str(z), mu_at_center=format_number(mu),
               volume_at_center=math.sqrt(float(z) / float(st.vol)),
               obstructive=True, live=is_live(c, target, competitors, z))
    return out
