import itertools
import math
from fractions import Fraction

import pytest

from toricembed.classes import (
    ObstructionClass, QuasiPerfectClass, break_point, check_diophantine, e_prime, enumerate_classes,
    error_vector, gromov_no_staircase, is_live, is_obstructive, m_bound_holds, mu_at, mu_upper_bound,
    perfect_pq_class,
)
from toricembed.domains import DomainError, DomainStats, WeightTuple, ball, irrational_ellipsoid_tuple
from toricembed.exactnum import Surd, sign, simplify
from toricembed.staircase import omega_tuple

ALPHA = Surd(1, 1, 2)
E0 = ObstructionClass(2, (1, 1), (1, 1, 1))


def ghost_target(n=12):
    return irrational_ellipsoid_tuple(ALPHA, n)


def test_diophantine_examples():
    assert check_diophantine(E0)
    assert check_diophantine(ObstructionClass(1, (1,), (1,)))
    assert not check_diophantine(ObstructionClass(2, (1, 1), (1, 1)))
    assert QuasiPerfectClass(22, (13, 9, 4, 4, 1, 1, 1, 1, 1), 22, 9).check()


def test_parse_and_text():
    c = ObstructionClass.parse("5; 3,2,1,1,1 | 2,2,1,1")
    assert c == perfect_pq_class(5, 2)
    assert str(c) == "5; 3,2,1,1,1 | 2,2,1,1"
    assert c.center() == Fraction(5, 2)
    with pytest.raises(DomainError):
        ObstructionClass.parse("x; 1")


def test_mu_examples():
    t = ghost_target()
    ep = e_prime(2)
    assert ep == ObstructionClass(2, (1, 1), (1, 1, 1))
    for z in (ALPHA, Fraction(5, 2), Fraction(27, 10), Fraction(3)):
        if z >= ALPHA:
            assert mu_at(ep, t, z) == simplify(z / ALPHA)
    om = omega_tuple(3)
    assert mu_at(E0, om, 3) == 3
    assert mu_at(ObstructionClass(1, (1,), ()), ball(), Fraction(7, 3)) == 0


def test_nonpositive_denominator_is_an_error():
    with pytest.raises(DomainError):
        mu_at(ObstructionClass(1, (1, 1), ()), WeightTuple(1, (Fraction(1, 2),) * 3), 2)


def test_break_points():
    assert break_point(E0, omega_tuple(3)) == 3
    assert break_point(perfect_pq_class(5, 2), ghost_target()) == Fraction(5, 2)
    assert break_point(e_prime(2), ghost_target()) == 3


def test_obstructive_examples():
    assert is_obstructive(E0, omega_tuple(3))
    assert is_obstructive(perfect_pq_class(5, 2), ghost_target())
    assert mu_at(perfect_pq_class(5, 2), ghost_target(), Fraction(5, 2)) == simplify(Fraction(5, 2) / ALPHA)
    assert not is_obstructive(ObstructionClass(1, (1,), ()), ball())


def test_liveness():
    t = ghost_target()
    e52, ep = perfect_pq_class(5, 2), e_prime(2)
    z = Fraction(5, 2)
    # both give (5/2)/alpha at 5/2: a tie, so only strict liveness rules E(5,2) out
    assert mu_at(e52, t, z) == mu_at(ep, t, z)
    assert not is_live(e52, t, [ep], z, strict=True)
    assert is_live(e52, t, [ep], z)
    assert is_live(e52, t, [], z)
    found = enumerate_classes(ball(), 5, obstructive_only=True)
    assert is_live(ObstructionClass(1, (), (1, 1)), ball(), found, Fraction(2))


def test_error_vectors():
    for c in enumerate_classes(ball(), 5, obstructive_only=True):
        a = break_point(c, ball())
        assert error_vector(c, ball(), a).below_one()
    ev = error_vector(E0, ball(), 3)
    # eps.eps = 9 - 4 sqrt(3) > 1, and indeed E_0 is not obstructive on the ball at 3
    assert ev.dot.compare(Surd(9, -4, 3)) == 0
    assert not ev.below_one() and not is_obstructive(E0, ball(), 3)


def test_error_vector_filter_sweep():
    targets = [ball(), WeightTuple(2, (1, 1)), WeightTuple(3, (1, 1))]
    samples = [Fraction(n, 4) for n in range(4, 33)]
    checked = 0
    for t in targets:
        for c in enumerate_classes(t, 6):
            if sign(simplify(c.d * t.b - sum(m * x for m, x in zip(c.mtilde, t.cuts)))) <= 0 or not c.m:
                continue
            points = samples + ([c.center()] if c.center() else [])
            for a in points:
                if not error_vector(c, t, a).below_one():
                    assert not is_obstructive(c, t, a)
                    checked += 1
    assert checked > 100


def test_mu_upper_bound():
    assert mu_upper_bound(ObstructionClass(1, (), (1, 1)), ball(), 2).squared == 4
    big = ObstructionClass(10**6, (), ())
    bound = mu_upper_bound(big, ball(), Fraction(5, 2))
    assert abs(float(bound) - math.sqrt(2.5)) < 1e-9
    d = 3
    assert mu_upper_bound(ObstructionClass(d, (), ()), ball(2), 5).squared == Fraction(5 * (d * d + 1), 4 * d * d)


def test_m_bound_and_floor_ceil_on_sweeps():
    for t in (omega_tuple(0), WeightTuple(5, (2, 2, 1)), WeightTuple(3, (1, 1))):
        for c in enumerate_classes(t, 6, obstructive_only=True):
            assert m_bound_holds(c, t)
            cuts = list(t.cuts)[: len(c.mtilde)]
            mt = list(c.mtilde) + [0] * (len(cuts) - len(c.mtilde))
            off = {}
            for m, b in zip(mt, cuts):
                x = Surd.lift(c.d * b / t.b)
                if m not in (x.floor(), x.ceil()):
                    off[b] = off.get(b, 0) + 1
            assert all(v <= 1 for v in off.values())


def brute_force_classes(target, d_max):
    """All ordered (d; m~; m) with d <= d_max by blind enumeration of multisets."""
    out = set()
    n = len(target.cuts)
    for d in range(1, d_max + 1):
        for k in range(0, n + 1):
            for mt in itertools.combinations_with_replacement(range(d, 0, -1), k):
                rest = 3 * d - 1 - sum(mt)
                for size in range(0, rest + 1):
                    for m in itertools.combinations_with_replacement(range(d, 0, -1), size):
                        c = ObstructionClass(d, mt, m)
                        if check_diophantine(c):
                            out.add(c)
    return out


def test_enumeration():
    t = WeightTuple(3, (1, 1))
    d1 = set(enumerate_classes(t, 1))
    assert d1 == {ObstructionClass(1, (1, 1), ()), ObstructionClass(1, (1,), (1,)), ObstructionClass(1, (), (1, 1))}
    assert E0 in enumerate_classes(t, 2)
    found = enumerate_classes(t, 3)
    assert all(check_diophantine(c) for c in found)
    assert set(found) == brute_force_classes(t, 3) and len(found) == len(set(found))
    assert found == enumerate_classes(t, 3)


def test_gromov_predicate():
    fuzzy = [DomainStats.from_values(2 * b + 1 + eps, 2 * b + eps + eps / 2)
             for b in (1, 2, 5) for eps in (Fraction(1, 10), Fraction(1, 2), Fraction(1))]
    assert all(gromov_no_staircase(s, 1) for s in fuzzy)
    assert not gromov_no_staircase(ball(), 1)
    assert not gromov_no_staircase(WeightTuple(2, (1, 1)), 1)
