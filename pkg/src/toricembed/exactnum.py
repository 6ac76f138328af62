"""Exact arithmetic: rationals (``fractions.Fraction``) and real quadratic surds.

A :class:`Surd` is ``a + b*sqrt(sigma)`` with rational ``a, b`` and a
square-free ``sigma``.  Rationals promote to surds with ``b = 0``.  Ordering is
decided exactly by comparing squares, never by floating point.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "Surd"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer; decimals are rejected to keep inputs exact."""
    s = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    value = Fraction(s)
    return value


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(f, s)`` with ``n = f*f*s`` and ``s`` square-free."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    f, s = 1, 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            f *= p
        if m % p == 0:
            m //= p
            s *= p
        p += 1
    return f, s * m


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_split(n)[0] == 1


class Surd:
    """Element ``a + b*sqrt(sigma)`` of a real quadratic field.

    ``sigma`` is canonicalised to its square-free part at construction.  When
    ``b == 0`` the value is rational and ``sigma`` is stored as 1, so it mixes
    freely with any field.
    """

    __slots__ = ("a", "b", "sigma")

    def __init__(self, a=0, b=0, sigma: int = 1):
        a = as_fraction(a)
        b = as_fraction(b)
        if b != 0:
            f, s = squarefree_split(int(sigma))
            if s == 1:
                a, b, s = a + b * f, Fraction(0), 1
            else:
                b = b * f
        else:
            s = 1
        if b == 0:
            s = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "sigma", s)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def sqrt(cls, n) -> "Surd":
        """Exact square root of a nonnegative rational, as a surd."""
        n = as_fraction(n)
        if n < 0:
            raise ValueError("square root of a negative number")
        if n == 0:
            return cls(0)
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, Fraction(1, n.denominator), n.numerator * n.denominator)

    # -- coercion -----------------------------------------------------
    @staticmethod
    def lift(x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return Surd(as_fraction(x))

    def _field(self, other: "Surd") -> int:
        if self.b == 0:
            return other.sigma
        if other.b == 0 or other.sigma == self.sigma:
            return self.sigma
        raise ValueError(f"mixed fields sqrt({self.sigma}) and sqrt({other.sigma})")

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            o = Surd.lift(other)
        except TypeError:
            return NotImplemented
        s = self._field(o)
        return Surd(self.a + o.a, self.b + o.b, s)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.sigma)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Surd.lift(other) - self

    def __mul__(self, other):
        try:
            o = Surd.lift(other)
        except TypeError:
            return NotImplemented
        s = self._field(o)
        return Surd(self.a * o.a + self.b * o.b * s, self.a * o.b + self.b * o.a, s)

    __rmul__ = __mul__

    def conj(self) -> "Surd":
        return Surd(self.a, -self.b, self.sigma)

    def norm(self) -> Fraction:
        """``x * conj(x) = a^2 - b^2 sigma``."""
        return self.a * self.a - self.b * self.b * self.sigma

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        c = self.conj()
        return Surd(c.a / n, c.b / n, self.sigma)

    def __truediv__(self, other):
        try:
            o = Surd.lift(other)
        except TypeError:
            return NotImplemented
        self._field(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Surd.lift(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Surd(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- ordering -----------------------------------------------------
    def sign(self) -> int:
        return surd_sign(self)

    def _cmp(self, other) -> int:
        return (self - Surd.lift(other)).sign()

    def __eq__(self, other):
        try:
            o = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.sigma == o.sigma)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.sigma))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.sigma)

    def floor(self) -> int:
        """Exact floor."""
        if self.b == 0:
            return math.floor(self.a)
        guess = math.floor(float(self))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def ceil(self) -> int:
        f = self.floor()
        return f if self == f else f + 1

    # -- text ---------------------------------------------------------
    def __str__(self):
        return format_surd(self)

    def __repr__(self):
        return f"Surd({format_surd(self)!r})"


def surd_sign(x) -> int:
    """Exact sign of ``a + b*sqrt(sigma)`` by comparing ``a^2`` with ``b^2 sigma``."""
    x = Surd.lift(x)
    a, b = x.a, x.b
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: whichever has the larger square wins
    diff = a * a - b * b * x.sigma
    if diff > 0:
        return sa
    if diff < 0:
        return sb
    return 0


def surd_mul_conj_identity_check(x) -> Fraction:
    """Return ``x * conj(x)`` as a rational."""
    x = Surd.lift(x)
    prod = x * x.conj()
    assert prod.b == 0
    return prod.a


def sign(x) -> int:
    if isinstance(x, Surd):
        return surd_sign(x)
    x = as_fraction(x)
    return (x > 0) - (x < 0)


def simplify(x):
    """Demote a rational-valued surd to ``Fraction``."""
    if isinstance(x, Surd) and x.b == 0:
        return x.a
    if isinstance(x, int):
        return Fraction(x)
    return x


def cmp_sqrt(x, y) -> int:
    """Sign of ``x - sqrt(y)`` exactly, for ``y >= 0`` in the same field as ``x``."""
    if sign(y) < 0:
        raise ValueError("square root of a negative number")
    sx = sign(x)
    if sx <= 0:
        if sx == 0 and sign(y) == 0:
            return 0
        return -1
    return sign(x * x - y)


class RootExpr:
    """Exact value ``r + s*sqrt(t)`` with ``r, s, t`` rationals or surds and ``t >= 0``."""

    __slots__ = ("r", "s", "t")

    def __init__(self, r=0, s=0, t=0):
        if sign(t) < 0:
            raise ValueError("negative radicand")
        self.r, self.s, self.t = r, s, t

    def sign(self) -> int:
        sr, ss = sign(self.r), sign(self.s) if sign(self.t) != 0 else 0
        if ss == 0:
            return sr
        if sr == 0 or sr == ss:
            return ss
        d = sign(self.r * self.r - self.s * self.s * self.t)
        if d > 0:
            return sr
        if d < 0:
            return ss
        return 0

    def compare(self, other) -> int:
        """Sign of ``self - other`` for a rational or surd ``other``."""
        return RootExpr(self.r - other, self.s, self.t).sign()

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(float(self.t))

    def __repr__(self):
        return f"RootExpr({self.r}, {self.s}, {self.t})"


# -- text forms ----------------------------------------------------------

_SURD_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sgn>[+-])?\s*(?P<b>\d+(?:/\d+)?)?\s*\*?\s*sqrt\((?P<s>\d+)\))?\s*$"
)


def format_surd(x) -> str:
    x = Surd.lift(x)
    if x.b == 0:
        return format_rational(x.a)
    coef = "" if abs(x.b) == 1 else f"{format_rational(abs(x.b))}*"
    root = f"{coef}sqrt({x.sigma})"
    if x.a == 0:
        return root if x.b > 0 else f"-{root}"
    sgn = "+" if x.b > 0 else "-"
    return f"{format_rational(x.a)} {sgn} {root}"


def format_number(x) -> str:
    if isinstance(x, Surd):
        return format_surd(x)
    return format_rational(as_fraction(x))


def parse_surd(text: str) -> Surd:
    """Parse ``"a + b*sqrt(s)"``; ``s`` must already be square-free."""
    s = text.strip()
    if "sqrt" not in s:
        return Surd(parse_rational(s))
    m = _SURD_RE.match(s)
    if not m or m.group("s") is None:
        raise ValueError(f"cannot parse surd {text!r}")
    a = parse_rational(m.group("a")) if m.group("a") else Fraction(0)
    b = parse_rational(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sgn") is None and m.group("a") and not m.group("b"):
        a, b = Fraction(0), a  # "2*sqrt(3)": the leading number is the coefficient
    if m.group("sgn") == "-":
        b = -b
    sigma = int(m.group("s"))
    if not is_squarefree(sigma) or sigma == 1:
        raise ValueError(f"non-canonical radicand {sigma} in {text!r}")
    return Surd(a, b, sigma)


def parse_number(text: str):
    if "sqrt" in text:
        return parse_surd(text)
    return parse_rational(text)


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def field_sqrt(x):
    """Square root of ``x`` inside the field of ``x``, or ``None`` if it leaves it.

    A rational argument may return a surd in a new field ``sqrt(s)``.
    """
    x = Surd.lift(x)
    if x.sign() < 0:
        return None
    if x.b == 0:
        return Surd.sqrt(x.a)
    r = _rational_sqrt(x.norm())
    if r is None:
        return None
    for cand in ((x.a + r) / 2, (x.a - r) / 2):
        u = _rational_sqrt(cand)
        if u:
            root = Surd(u, x.b / (2 * u), x.sigma)
            if root.sign() < 0:
                root = -root
            if root * root == x:
                return root
    return None
