"""Cremona moves on weight tuples and on class vectors, exceptionality by
reduction, and Cremona-length bounds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .domains import DomainError, WeightTuple, stats
from .exactnum import sign, simplify


def cremona_defect_tuple(t: WeightTuple):
    cuts = list(t.cuts) + [Fraction(0)] * max(0, 3 - len(t.cuts))
    return simplify(t.b - cuts[0] - cuts[1] - cuts[2])


def cremona_move_tuple(t: WeightTuple) -> WeightTuple:
    """One move on (b; b1, b2, b3, ...); reduced tuples come back unchanged."""
    d = cremona_defect_tuple(t)
    if sign(d) >= 0:
        return t
    cuts = list(t.cuts) + [Fraction(0)] * max(0, 3 - len(t.cuts))
    moved = [c + d for c in cuts[:3]] + cuts[3:]
    return WeightTuple(t.b + d, tuple(c for c in moved if sign(c) != 0), t.tail_sum, t.tail_sq)


def cremona_reduce_tuple(t: WeightTuple, max_steps: int = 10_000) -> list[WeightTuple]:
    """The chain t, Cr(t), Cr(Cr(t)), ... up to the first reduced tuple."""
    chain = [t]
    for _ in range(max_steps):
        nxt = cremona_move_tuple(chain[-1])
        if nxt is chain[-1]:
            return chain
        chain.append(nxt)
    raise RuntimeError("tuple reduction did not terminate")


def cremona_length_upper(t: WeightTuple) -> int:
    """Number of cuts left after reducing along the three-largest path."""
    return len(cremona_reduce_tuple(t)[-1].cuts)


# -- class vectors -------------------------------------------------------------

@dataclass(frozen=True)
class ClassVector:
    """d L - sum n_i E_i; entries may go negative during reduction."""

    d: int
    n: tuple[int, ...]

    @classmethod
    def of(cls, d: int, *parts: Sequence[int]) -> "ClassVector":
        entries: list[int] = []
        for p in parts:
            entries.extend(int(x) for x in p)
        return cls(int(d), tuple(entries))

    def c1(self) -> int:
        return 3 * self.d - sum(self.n)

    def self_intersection(self) -> int:
        return self.d * self.d - sum(x * x for x in self.n)

    def sorted(self) -> "ClassVector":
        return ClassVector(self.d, tuple(sorted(self.n, reverse=True)))

    def nonzero(self) -> tuple[int, ...]:
        return tuple(sorted((x for x in self.n if x), reverse=True))

    def __str__(self):
        return f"({self.d}; {','.join(map(str, self.n))})"


def class_move(v: ClassVector, i: int, j: int, k: int) -> ClassVector:
    """c_{i,j,k} with 1-based positions: add the defect d - n_i - n_j - n_k to d and to n_i, n_j, n_k."""
    idx = (i, j, k)
    if len(set(idx)) != 3:
        raise DomainError("Cremona move needs three distinct positions")
    if any(x < 1 or x > len(v.n) for x in idx):
        raise IndexError(f"positions {idx} out of range for length {len(v.n)}")
    delta = v.d - v.n[i - 1] - v.n[j - 1] - v.n[k - 1]
    n = list(v.n)
    for x in idx:
        n[x - 1] += delta
    return ClassVector(v.d + delta, tuple(n))


@dataclass
class ReductionTrace:
    start: ClassVector
    steps: list = field(default_factory=list)   # (defect, vector after the move)
    end: Optional[ClassVector] = None
    exceptional: bool = False
    reason: str = ""

    def to_json(self) -> str:
        return json.dumps({"start": [self.start.d, list(self.start.n)],
                           "moves": [[[1, 2, 3], delta] for delta, _ in self.steps],
                           "end": [self.end.d, list(self.end.n)] if self.end else None,
                           "exceptional": self.exceptional, "reason": self.reason})

    def replay(self) -> ClassVector:
        """Re-apply the recorded moves (sort, then c_{1,2,3}) from the start."""
        v = _padded(self.start)
        for _ in self.steps:
            v = class_move(v.sorted(), 1, 2, 3)
        return v.sorted()


def _padded(v: ClassVector) -> ClassVector:
    if len(v.n) >= 3:
        return v
    return ClassVector(v.d, v.n + (0,) * (3 - len(v.n)))


def is_exceptional(v: ClassVector, max_steps: int = 1_000_000) -> tuple[bool, ReductionTrace]:
    """Reduce by moves on the three largest entries; exceptional iff it ends at (0; -1)."""
    if v.c1() != 1 or v.self_intersection() != -1:
        raise DomainError(f"{v} fails the Diophantine identities")
    trace = ReductionTrace(v)
    cur = _padded(v).sorted()
    for _ in range(max_steps):
        if cur.d == 0:
            trace.end = cur
            trace.exceptional = cur.nonzero() == (-1,)
            trace.reason = "reached E_1" if trace.exceptional else "degree zero but not E_1"
            return trace.exceptional, trace
        if cur.n[-1] < 0:
            trace.end, trace.reason = cur, "negative entry before degree zero"
            return False, trace
        delta = cur.d - cur.n[0] - cur.n[1] - cur.n[2]
        if delta >= 0:
            trace.end, trace.reason = cur, "reduced but not E_1"
            return False, trace
        cur = class_move(cur, 1, 2, 3).sorted()
        trace.steps.append((delta, cur))
    raise RuntimeError("class reduction did not terminate")


def capacity_invariance_check(t1: WeightTuple, t2: WeightTuple, K: int) -> bool:
    """Both tuples admissible and their capacities agree for k <= K."""
    from .ech import convex_capacities

    for t in (t1, t2):
        if sign(stats(t).vol) <= 0:
            raise DomainError(f"{t} has nonpositive volume")
    return convex_capacities(t1, K).values == convex_capacities(t2, K).values
