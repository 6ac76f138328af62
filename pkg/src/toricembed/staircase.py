"""Recursive staircase families with seeds (2;1,1;W(3,1)) and E(22+10n, 9+4n),
their limit domains, perfectness and obstructiveness checks, the overshadow
search, and ghost stairs for irrational ellipsoids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classes import (
    ObstructionClass,
    QuasiPerfectClass,
    e_prime,
    m_bound_holds,
    mu_at,
    perfect_pq_class,
)
from .cremona import ClassVector, is_exceptional
from .domains import DomainError, WeightTuple, irrational_ellipsoid_tuple, stats
from .exactnum import Surd, sign, simplify
from .weights import cf_of, convergents, integral_weights, surd_cf


def recurrence(x0, x1, t: int, k_max: int) -> list:
    """x_0..x_{k_max} with x_{k+1} = t x_k - x_{k-1}."""
    out = [x0, x1]
    while len(out) <= k_max:
        out.append(t * out[-1] - out[-2])
    return out[: k_max + 1]


# -- closed forms -------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    """x_k = X lam^k + conj(X) conj(lam)^k with lam = (t + sqrt(t^2-4))/2."""

    X: Surd
    t: int

    @property
    def sigma(self) -> int:
        return self.t * self.t - 4

    @property
    def lam(self) -> Surd:
        return Surd(Fraction(self.t, 2), Fraction(1, 2), self.sigma)

    def value(self, k: int):
        lam = self.lam
        return simplify(self.X * lam ** k + self.X.conj() * lam.conj() ** k)


def closed_form(x0, x1, t: int) -> ClosedForm:
    if t < 3:
        raise DomainError("recursion variable must be at least 3")
    sigma = t * t - 4
    return ClosedForm(Surd(Fraction(x0, 2), Fraction(2 * x1 - t * x0, 2 * sigma), sigma), t)


# -- the family ---------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """One step (d; m~ positional; W(p,q)); m~ is aligned with the limit cuts."""

    k: int
    d: int
    mtilde: tuple[int, ...]
    p: int
    q: int

    def as_quasi_perfect(self) -> QuasiPerfectClass:
        return QuasiPerfectClass(self.d, self.mtilde, self.p, self.q)

    def as_class(self) -> ObstructionClass:
        return ObstructionClass(self.d, self.mtilde, integral_weights(self.p, self.q))

    def class_vector(self) -> ClassVector:
        return ClassVector.of(self.d, self.mtilde, integral_weights(self.p, self.q))


def adjacency(a: Step, b: Step) -> int:
    """d_a d_b - sum m~_a m~_b."""
    return a.d * b.d - sum(x * y for x, y in zip(a.mtilde, b.mtilde))


@dataclass(frozen=True)
class StaircaseFamily:
    n: int
    t: int
    E0: Step
    E1: Step

    @property
    def sigma(self) -> int:
        return self.t * self.t - 4

    @property
    def lam(self) -> Surd:
        return Surd(Fraction(self.t, 2), Fraction(1, 2), self.sigma)

    @property
    def length(self) -> int:
        return len(self.E1.mtilde)


def make_family(n: int) -> StaircaseFamily:
    if n < 0:
        raise DomainError("n must be nonnegative")
    length = 9 + 2 * n
    p1, q1 = 22 + 10 * n, 9 + 4 * n
    mt1 = (13 + 6 * n, 9 + 4 * n, 4 + 2 * n, 4 + 2 * n) + (1,) * (5 + 2 * n)
    assert mt1 == integral_weights(p1, p1 - q1) + (1,)
    E0 = Step(0, 2, (1, 1) + (0,) * (length - 2), 3, 1)
    E1 = Step(1, p1, mt1, p1, q1)
    t = 5 + 2 * n
    if E0.p * E1.q - E1.p * E0.q != t:
        raise DomainError("recursion variable does not match the seeds")
    if adjacency(E0, E1) != E1.p * E0.q:
        raise DomainError("seeds are not adjacent")
    return StaircaseFamily(n, t, E0, E1)


def generate_steps(f: StaircaseFamily, k_max: int) -> list[Step]:
    ds = recurrence(f.E0.d, f.E1.d, f.t, k_max)
    ps = recurrence(f.E0.p, f.E1.p, f.t, k_max)
    qs = recurrence(f.E0.q, f.E1.q, f.t, k_max)
    cols = [recurrence(a, b, f.t, k_max) for a, b in zip(f.E0.mtilde, f.E1.mtilde)]
    return [Step(k, ds[k], tuple(c[k] for c in cols), ps[k], qs[k]) for k in range(k_max + 1)]


@dataclass
class StepChecks:
    quasi_perfect: bool
    adjacent_to_next: Optional[bool]
    det_is_t: Optional[bool]
    decreasing: Optional[bool]


def check_steps(f: StaircaseFamily, steps: list[Step]) -> list[StepChecks]:
    out = []
    for i, s in enumerate(steps):
        nxt = steps[i + 1] if i + 1 < len(steps) else None
        out.append(StepChecks(
            s.as_quasi_perfect().check(),
            None if nxt is None else adjacency(s, nxt) == nxt.p * s.q,
            None if nxt is None else s.p * nxt.q - nxt.p * s.q == f.t,
            None if nxt is None else Fraction(nxt.p, nxt.q) < Fraction(s.p, s.q),
        ))
    return out


# -- limit domain -------------------------------------------------------------------

def beta(n: int) -> Surd:
    return 1 / Surd(17 + 8 * n, 1, (3 + 2 * n) * (7 + 2 * n))


def limit_cuts_formula(n: int) -> tuple:
    b = beta(n)
    return ((2 + n) * b + Fraction(1, 2), Fraction(1, 2) - (2 + n) * b,
            (4 + 2 * n) * b, (4 + 2 * n) * b) + (b,) * (5 + 2 * n)


@dataclass
class LimitDomain:
    n: int
    cuts: tuple
    tuple: WeightTuple
    vol: object
    per: object
    z_inf: object
    v_inf: object
    checks: dict = field(default_factory=dict)


def limit_domain(f: StaircaseFamily) -> LimitDomain:
    """Cuts B_j = M_j / D from the closed forms of the m~ and d sequences."""
    n, t = f.n, f.t
    D = closed_form(f.E0.d, f.E1.d, t).X
    P = closed_form(f.E0.p, f.E1.p, t).X
    Q = closed_form(f.E0.q, f.E1.q, t).X
    cuts = tuple(simplify(closed_form(a, b, t).X / D) for a, b in zip(f.E0.mtilde, f.E1.mtilde))
    wt = WeightTuple(Fraction(1), cuts)
    st = stats(wt)
    b = beta(n)
    root = Surd(0, 1, (3 + 2 * n) * (7 + 2 * n))
    z_inf = simplify(P / Q)
    v_inf = simplify(D / Q)
    checks = {
        "cuts_match_formula": cuts == limit_cuts_formula(n),
        "b1_plus_b2_is_1": cuts[0] + cuts[1] == 1,
        "vol": st.vol == Fraction(1, 2) - b * b * (45 + 10 * n * n + 42 * n),
        "per": st.per == 2 - b * (13 + 6 * n),
        "z_inf": z_inf == (29 + 14 * n + 3 * root) / (13 + 6 * n + root),
        "v_inf": v_inf == 2 * (17 + 8 * n + root) / (13 + 6 * n + root),
        "v_inf_squared": v_inf * v_inf * st.vol == z_inf,
        "z_inf_is_accumulation_point": st.a0 == z_inf,
    }
    return LimitDomain(n, cuts, wt, st.vol, st.per, z_inf, v_inf, checks)


# -- perfectness and obstructiveness -------------------------------------------------

def verify_perfect(f: StaircaseFamily, k_max: int):
    """Each step reduces to (0; -1) under moves on the three largest entries."""
    results = []
    for s in generate_steps(f, k_max):
        ok, trace = is_exceptional(s.class_vector())
        results.append((s.k, ok, trace))
    return all(ok for _, ok, _ in results), results


def step_lambda(s: Step, dom: LimitDomain):
    return simplify(s.d - sum((m * b for m, b in zip(s.mtilde, dom.cuts)), Fraction(0)))


@dataclass
class ObstructiveReport:
    k: int
    center: Fraction
    mu_center: object
    v_center_sq: object
    obstructive: bool
    ratio: object   # lambda^2 / (p q), must increase to Vol


def verify_obstructive(f: StaircaseFamily, k_max: int):
    """p q Vol > lambda^2 at each center, and lambda^2/(pq) strictly increasing in k."""
    dom = limit_domain(f)
    reports = []
    for s in generate_steps(f, k_max):
        lam = step_lambda(s, dom)
        if sign(lam) <= 0:
            raise DomainError(f"step {s.k} has nonpositive denominator")
        ratio = simplify(lam * lam / (s.p * s.q))
        reports.append(ObstructiveReport(
            s.k, Fraction(s.p, s.q), simplify(s.p / lam), simplify(Fraction(s.p, s.q) / dom.vol),
            sign(dom.vol - ratio) > 0, ratio))
    increasing = all(sign(b.ratio - a.ratio) > 0 for a, b in zip(reports, reports[1:]))
    return all(r.obstructive for r in reports) and increasing, reports, increasing


# -- the companion family in one blowup ----------------------------------------------

def matrix_a(n: int) -> tuple[tuple[int, int], tuple[int, int]]:
    return ((17 + 10 * n, 5), (7 + 4 * n, 2))


def companion_centers(n: int, k_max: int) -> list[tuple[int, int]]:
    """(p_bar_k, q_bar_k) aligned with the steps: [2n+6] at k=2, [2n+7;2n+4] at k=3."""
    t = 5 + 2 * n
    p2, q2 = 2 * n + 6, 1
    p3, q3 = (2 * n + 7) * (2 * n + 4) + 1, 2 * n + 4
    p1, q1 = t * p2 - p3, t * q2 - q3
    p0, q0 = t * p1 - p2, t * q1 - q2
    return list(zip(recurrence(p0, p1, t, k_max), recurrence(q0, q1, t, k_max)))


def matrix_relation_check(n: int, k_max: int) -> dict:
    f = make_family(n)
    steps = generate_steps(f, k_max)
    (a, b), (c, d) = matrix_a(n)
    bars = companion_centers(n, k_max)
    matrix_ok = all((a * pb + b * qb, c * pb + d * qb) == (s.p, s.q) for (pb, qb), s in zip(bars, steps))
    bar_degrees_ok = all(((2 + n) * pb + (3 + n) * qb) % (2 * n + 5) == 0
                         and ((1 + n) * pb + (4 + n) * qb) % (2 * n + 5) == 0 for pb, qb in bars)
    mt_ok = all(s.mtilde == (s.d - s.q, s.q, s.d - 2 * s.q, s.d - 2 * s.q)
                + (5 * s.q - s.d - s.p,) * (2 * n + 5) for s in steps)
    deg_ok = all(s.d * (5 + 2 * n) + 2 * (2 + n) * s.p - 2 * (11 + 5 * n) * s.q == 0 for s in steps)
    bar_cf_ok = True
    for k, (pb, qb) in enumerate(bars):
        if k < 2:
            continue
        reps = (k - 2) // 2
        expect = [2 * n + 7, 2 * n + 3] * reps
        expect += [2 * n + 7, 2 * n + 4] if k % 2 else [2 * n + 6]
        bar_cf_ok &= list(cf_of(pb, qb).entries) == expect
    return {"matrix": matrix_ok, "bar_identities_integral": bar_degrees_ok,
            "mtilde_identity": mt_ok, "degree_identity": deg_ok, "bar_continued_fractions": bar_cf_ok}


def companion_class(n: int, k: int) -> ClassVector:
    """B_k(n) = (d_bar; m_bar; W(p_bar, q_bar)) in one blowup, for k >= 2."""
    pb, qb = companion_centers(n, k)[k]
    db = ((2 + n) * pb + (3 + n) * qb) // (2 * n + 5)
    mb = ((1 + n) * pb + (4 + n) * qb) // (2 * n + 5)
    return ClassVector.of(db, (mb,), integral_weights(pb, qb))


# -- overshadow search -------------------------------------------------------------

@dataclass
class OvershadowCandidate:
    d: int
    C: int
    A: int
    mtilde: tuple
    K: int
    reason: Optional[str] = None


@dataclass
class OvershadowReport:
    n: int
    d_max: int
    arithmetic_survivors: list
    candidates: list          # survivors of every filter
    counts: dict


def _floor_ceil(x) -> tuple[int, ...]:
    lo = Surd.lift(x).floor()
    hi = Surd.lift(x).ceil()
    return (lo,) if lo == hi else (lo, hi)


def _has_m_vector(total: int, sq: int) -> bool:
    from .classes import _nonincreasing
    if total < 0 or sq < 0:
        return False
    return next(iter(_nonincreasing(total, sq, max(total, 1), None)), None) is not None


def ca_ratio_bound(n: int) -> Surd:
    """Lower bound (5+2n+sqrt(sigma))^2/12 for C/A when A > 0."""
    r = Surd(5 + 2 * n, 1, (3 + 2 * n) * (7 + 2 * n))
    return r * r / 12


def overshadow_search(n: int, d_max: int = 18, block_patterns=(0, 1),
                      a_max: Optional[int] = None) -> OvershadowReport:
    """Candidate overshadowing classes with d <= d_max.

    Entries follow the floor/ceil rule against the limit cuts, the long block
    has K = sum of its entries in ``block_patterns``, and both linear
    identities tying (A, C) to m~ must hold exactly.  A > 0 is first tested
    against the C/A lower bound.  Survivors then face the ordering, the
    (M-d)^2 bound, the nontriviality inequality and the existence of an m
    vector with the right sum and square sum.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    f = make_family(n)
    dom = limit_domain(f)
    b1, b2, b3, b4 = dom.cuts[0], dom.cuts[1], dom.cuts[2], dom.cuts[4]
    blen = 2 * n + 5
    target = dom.tuple
    bb = simplify(1 - dom.vol)
    ratio = ca_ratio_bound(n)
    counts = {"floor_ceil_patterns": 0, "c_over_a": 0, "arith": 0, "unordered": 0, "m_bound": 0,
              "nontrivial": 0, "no_m_vector": 0, "nonpositive_lambda": 0}
    survivors, final = [], []
    for d in range(1, d_max + 1):
        blocks = set()
        opts4 = _floor_ceil(d * b4)
        for main in opts4:
            for odd in opts4:
                blocks.add(tuple(sorted([main] * (blen - 1) + [odd], reverse=True)))
        top = d + 2 if a_max is None else a_max
        for A in range(0, top + 1):
            for m1 in _floor_ceil(d * b1):
                for m2 in _floor_ceil(d * b2):
                    s = 2 * d - m1 - m2 - A
                    if s % 3:
                        continue
                    C = s // 3
                    if not (d - 2 <= 3 * C + A <= d + 2) or C <= 0:
                        continue
                    if A > 0:
                        if sign(C - ratio * A) < 0:
                            counts["c_over_a"] += 1
                            continue
                    for m3 in _floor_ceil(d * b3):
                        for m4 in _floor_ceil(d * b3):
                            if m4 > m3:
                                continue
                            L = m3 + m4
                            for block in sorted(blocks):
                                K = sum(block)
                                if K not in block_patterns:
                                    continue
                                counts["floor_ceil_patterns"] += 1
                                if C * (11 + 5 * n) + A * (2 + n) != (2 + n) * (m1 - m2) + (4 + 2 * n) * L + K:
                                    continue
                                counts["arith"] += 1
                                cand = OvershadowCandidate(d, C, A, (m1, m2, m3, m4) + block, K)
                                survivors.append(cand)
                                cand.reason = _eliminate(cand, dom, target, bb, counts)
                                if cand.reason is None:
                                    final.append(cand)
    return OvershadowReport(n, d_max, survivors, final, counts)


def _eliminate(c: OvershadowCandidate, dom: LimitDomain, target, bb, counts) -> Optional[str]:
    mt, d = c.mtilde, c.d
    if any(a < b for a, b in zip(mt, mt[1:])):
        counts["unordered"] += 1
        return "unordered: m~ is not nonincreasing along the cuts"
    cls_m = ObstructionClass(d, mt, ())
    if not m_bound_holds(cls_m, target):
        counts["m_bound"] += 1
        return "(M-d)^2 exceeds 1/|b|^2 - 1"
    lam = simplify(d - sum((m * b for m, b in zip(mt, dom.cuts)), Fraction(0)))
    if sign(lam) <= 0:
        counts["nonpositive_lambda"] += 1
        return "nonpositive denominator"
    norm = sum(x * x for x in mt)
    if sign((d * d - norm + 1) * (1 - bb) - lam * lam) <= 0:
        counts["nontrivial"] += 1
        return "fails (d^2-|m~|^2+1)(1-|b|^2) > lambda^2"
    if not _has_m_vector(3 * d - 1 - sum(mt), d * d + 1 - norm):
        counts["no_m_vector"] += 1
        return "no m vector satisfies both Diophantine identities"
    return None


# -- ghost stairs -------------------------------------------------------------------

@dataclass
class GhostRow:
    n: int
    p: int
    q: int
    cls: ObstructionClass
    mu: object
    expected: object
    matches: bool
    obstructive: bool
    reference: object      # capacity of E(1, alpha) at z_n: 1 below alpha, z/alpha above
    below_reference: bool
    e_prime_value: object
    below_e_prime: bool


@dataclass
class GhostReport:
    alpha: Surd
    k: int
    rows: list
    e_prime_on_interval: bool


def ghost_stairs(alpha, N: int) -> GhostReport:
    """Perfect classes E(p_n, q_n) at the convergents of alpha, checked exactly."""
    if not isinstance(alpha, Surd) or alpha.is_rational():
        raise DomainError("alpha must be a quadratic irrational")
    if alpha <= 1:
        raise DomainError("alpha must exceed 1")
    k = alpha.floor()
    cf = surd_cf(alpha, N + 1)
    conv = convergents(cf)
    ep = e_prime(k)
    rows = []
    vol = alpha
    for n in range(1, N + 1):
        p, q = conv[n]
        z = Fraction(p, q)
        cls = perfect_pq_class(p, q)
        target = irrational_ellipsoid_tuple(alpha, len(cls.mtilde) + 2)
        mu = mu_at(cls, target, z)
        expected = simplify(z / alpha) if n % 2 else Fraction(1)
        reference = Fraction(1) if z <= alpha else simplify(z / alpha)
        ept = irrational_ellipsoid_tuple(alpha, len(ep.mtilde) + 2)
        e_val = mu_at(ep, ept, z)
        rows.append(GhostRow(n, p, q, cls, mu, expected, mu == expected,
                             sign(mu * mu * vol - z) > 0, reference,
                             sign(reference - mu) >= 0, e_val, sign(e_val - mu) >= 0))
    ept = irrational_ellipsoid_tuple(alpha, len(ep.mtilde) + 2)
    samples = [simplify(alpha + (k + 1 - alpha) * Fraction(i, 7)) for i in range(8)]
    on_interval = all(simplify(mu_at(ep, ept, z)) == simplify(z / alpha) for z in samples)
    return GhostReport(alpha, k, rows, on_interval)


# -- reports -------------------------------------------------------------------------

def blocking_class_check(n: int) -> dict:
    """E(2,1) = (2;1,1,1;W(2,1)) meets the volume curve exactly at z_inf."""
    dom = limit_domain(make_family(n))
    blocker = ObstructionClass(2, (1, 1, 1), integral_weights(2, 1))
    mu = simplify(mu_at(blocker, dom.tuple, dom.z_inf))
    return {"mu_at_z_inf": mu, "v_inf": dom.v_inf, "passes_through": mu == dom.v_inf}


@dataclass
class StepReport:
    n: int
    k: int
    center: Fraction
    quasi_perfect: bool
    perfect: bool
    obstructive: bool
    mu_center: object
    v_center: float

    def to_json(self) -> dict:
        from .exactnum import format_number
        return {"n": self.n, "k": self.k, "center": str(self.center),
                "quasi_perfect": self.quasi_perfect, "perfect": self.perfect,
                "obstructive": self.obstructive, "mu_center": format_number(self.mu_center),
                "V_center": self.v_center}


def step_reports(n: int, k_max: int) -> list[StepReport]:
    f = make_family(n)
    steps = generate_steps(f, k_max)
    _, perf = verify_perfect(f, k_max)
    _, obs, _ = verify_obstructive(f, k_max)
    out = []
    for s, (_, ok, _), o in zip(steps, perf, obs):
        out.append(StepReport(n, s.k, o.center, s.as_quasi_perfect().check(), ok,
                              o.obstructive, o.mu_center, math.sqrt(float(o.v_center_sq))))
    return out


def centers_csv(n: int, k_max: int) -> str:
    f = make_family(n)
    z = float(limit_domain(f).z_inf)
    lines = ["k,p,q,center,z_inf,gap"]
    for s in generate_steps(f, k_max):
        c = s.p / s.q
        lines.append(f"{s.k},{s.p},{s.q},{c!r},{z!r},{c - z!r}")
    return "\n".join(lines) + "\n"


def omega_tuple(n: int) -> WeightTuple:
    return limit_domain(make_family(n)).tuple
