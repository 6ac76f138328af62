"""Continued fractions, weight expansions and their local affine forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import Surd, as_fraction, format_rational


def _check_center(p: int, q: int) -> None:
    if not (isinstance(p, int) and isinstance(q, int)):
        raise TypeError("p and q must be integers")
    if q < 1 or p < q:
        raise ValueError(f"need p >= q >= 1, got {p}/{q}")
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")


@dataclass(frozen=True)
class ContinuedFraction:
    entries: tuple[int, ...]

    def value(self) -> Fraction:
        x = Fraction(self.entries[-1])
        for a in reversed(self.entries[:-1]):
            x = a + 1 / x
        return x

    def convergents(self) -> list[tuple[int, int]]:
        return convergents(self.entries)

    def __str__(self):
        head, tail = self.entries[0], self.entries[1:]
        if not tail:
            return f"[{head}]"
        return f"[{head};{','.join(map(str, tail))}]"


def cf_of(p: int, q: int) -> ContinuedFraction:
    """Canonical continued fraction of p/q (no trailing 1 unless it is [1])."""
    _check_center(p, q)
    entries = []
    while q:
        a, r = divmod(p, q)
        entries.append(a)
        p, q = q, r
    return ContinuedFraction(tuple(entries))


def cf_value(entries: Sequence[int]) -> Fraction:
    return ContinuedFraction(tuple(entries)).value()


def convergents(entries: Sequence[int]) -> list[tuple[int, int]]:
    """Numerators and denominators of the successive convergents."""
    out = []
    p0, q0, p1, q1 = 1, 0, entries[0], 1
    out.append((p1, q1))
    for a in entries[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def surd_cf(x: Surd, n_terms: int) -> list[int]:
    """First ``n_terms`` partial quotients of an irrational surd, computed exactly."""
    out = []
    for _ in range(n_terms):
        a = x.floor()
        out.append(a)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def _blocks(p: int, q: int) -> list[tuple[int, int]]:
    """(value, multiplicity) blocks of W(p,q): Euclidean remainders with quotients."""
    out = []
    r0, r1 = p, q
    while r1:
        a, r2 = divmod(r0, r1)
        out.append((r1, a))
        r0, r1 = r1, r2
    return out


def integral_weights(p: int, q: int) -> tuple[int, ...]:
    """W(p,q) = q * w(p/q), entries are positive integers."""
    _check_center(p, q)
    out: list[int] = []
    for value, mult in _blocks(p, q):
        out.extend([value] * mult)
    return tuple(out)


@dataclass(frozen=True)
class WeightExpansion:
    entries: tuple[Fraction, ...]
    blocks: tuple[tuple[Fraction, int], ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return ",".join(format_rational(x) for x in self.entries)


def weight_expansion(p: int, q: int) -> WeightExpansion:
    _check_center(p, q)
    blocks = tuple((Fraction(v, q), m) for v, m in _blocks(p, q))
    entries = tuple(v for v, m in blocks for _ in range(m))
    return WeightExpansion(entries, blocks)


def weights_of(z, n_entries: Optional[int] = None) -> list:
    """Weight expansion of a rational or surd ``z >= 1``.

    For irrational ``z`` the expansion is infinite and ``n_entries`` must be
    given; for rational ``z`` the full expansion is returned, truncated or
    zero-padded to ``n_entries`` when that is supplied.
    """
    if isinstance(z, Surd) and z.is_rational():
        z = z.a
    out: list = []
    if isinstance(z, Surd):
        if n_entries is None:
            raise ValueError("an irrational weight expansion needs n_entries")
        r0, r1 = z, Surd(1)
        while len(out) < n_entries:
            a = (r0 / r1).floor()
            out.extend([r1] * a)
            r0, r1 = r1, r0 - a * r1
            if r1 == 0:
                break
        return out[:n_entries] + [Fraction(0)] * max(0, n_entries - len(out))
    z = as_fraction(z)
    if z < 1:
        raise ValueError("weight expansion needs z >= 1")
    r0, r1 = z, Fraction(1)
    while r1:
        a = math.floor(r0 / r1)
        if n_entries is not None and len(out) + a > n_entries:
            out.extend([r1] * (n_entries - len(out)))
            return out
        out.extend([r1] * a)
        r0, r1 = r1, r0 - a * r1
    if n_entries is not None:
        out.extend([Fraction(0)] * (n_entries - len(out)))
    return out


def weight_length(z: Fraction) -> int:
    """Number of entries in w(z), the sum of the partial quotients."""
    z = as_fraction(z)
    return sum(cf_of(z.numerator, z.denominator).entries)


# -- local affine forms ------------------------------------------------------

@dataclass(frozen=True)
class AffineForm:
    alpha: Fraction
    beta: Fraction

    def __call__(self, z):
        return self.alpha + self.beta * z

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.alpha - other.alpha, self.beta - other.beta)

    def scale(self, k) -> "AffineForm":
        return AffineForm(self.alpha * k, self.beta * k)

    def __str__(self):
        return f"{format_rational(self.alpha)}{self.beta:+}*z"


@dataclass(frozen=True)
class OneSidedForms:
    lo: Fraction
    hi: Fraction
    blocks: tuple[tuple[AffineForm, int], ...]
    tail: AffineForm  # next form, multiplicity varies with z

    def entries(self, z, n: int) -> list:
        out = []
        for form, mult in self.blocks:
            out.extend([form(z)] * mult)
        while len(out) < n:
            out.append(self.tail(z))
        return out[:n]


@dataclass(frozen=True)
class LocalLinearForms:
    p: int
    q: int
    left: Optional[OneSidedForms]
    right: OneSidedForms


def _euclid_forms(quotients: Sequence[int]) -> tuple[list[tuple[AffineForm, int]], AffineForm]:
    r0 = AffineForm(Fraction(0), Fraction(1))  # z
    r1 = AffineForm(Fraction(1), Fraction(0))  # 1
    blocks = []
    for a in quotients:
        blocks.append((r1, a))
        r0, r1 = r1, r0 - r1.scale(a)
    return blocks, r1


def local_forms(p: int, q: int) -> LocalLinearForms:
    """Affine forms of the leading entries of w(z) on each side of p/q.

    One side has continued fractions starting ``[a_0;...,a_n, ...]`` and the
    other ``[a_0;...,a_n - 1, 1, ...]``; each side is the open interval of z
    with that prefix, and the forms cover the first ``len(W(p,q))`` entries.
    """
    _check_center(p, q)
    a = list(cf_of(p, q).entries)
    n = len(a) - 1
    center = Fraction(p, q)

    def side_a():
        blocks, tail = _euclid_forms(a)
        other = cf_value(a[:-1] + [a[-1] + 1])
        return blocks, tail, other

    def side_b():
        if n == 0 and a[0] == 1:
            return None
        if n == 0:
            quot = [a[0] - 1, 1]
            other = Fraction(2 * a[0] - 1, 2)
        else:
            quot = a[:-1] + [a[-1] - 1, 1]
            other = cf_value(a[:-1] + [a[-1] - 1, 2])
        blocks, tail = _euclid_forms(quot)
        return blocks, tail, other

    sides = {}
    for name, made in (("A", side_a()), ("B", side_b())):
        if made is None:
            continue
        blocks, tail, other = made
        lo, hi = sorted((center, other))
        sides[name] = OneSidedForms(lo, hi, tuple((f, m) for f, m in blocks if m > 0), tail)
    # a larger n-th quotient pushes z up when n is even
    if n % 2 == 0:
        right, left = sides["A"], sides.get("B")
    else:
        left, right = sides["A"], sides["B"]
    return LocalLinearForms(p, q, left, right)
