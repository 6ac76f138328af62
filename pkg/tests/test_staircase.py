import math
from fractions import Fraction

import mpmath
import pytest

from toricembed.domains import DomainError
from toricembed.exactnum import Surd
from toricembed.staircase import (
    adjacency, blocking_class_check, centers_csv, check_steps, closed_form, companion_class,
    generate_steps, ghost_stairs, limit_domain, make_family, matrix_relation_check,
    overshadow_search, recurrence, step_reports, verify_obstructive, verify_perfect,
)
from toricembed.cremona import is_exceptional

NS = range(4)


def test_recurrence_and_closed_form_agree():
    for t in (3, 5, 11):
        xs = recurrence(2, 7, t, 12)
        cf = closed_form(2, 7, t)
        assert [cf.value(k) for k in range(13)] == xs
    with pytest.raises(DomainError):
        closed_form(1, 2, 2)


@pytest.mark.parametrize("n", NS)
def test_seeds_and_steps(n):
    f = make_family(n)
    assert f.t == 5 + 2 * n and f.length == 9 + 2 * n
    assert (f.E1.p, f.E1.q) == (22 + 10 * n, 9 + 4 * n)
    steps = generate_steps(f, 8)
    checks = check_steps(f, steps)
    assert all(c.quasi_perfect for c in checks)
    assert all(c.adjacent_to_next and c.det_is_t and c.decreasing for c in checks[:-1])
    assert adjacency(steps[0], steps[1]) == steps[1].p * steps[0].q


@pytest.mark.parametrize("n", NS)
def test_limit_domain_identities(n):
    dom = limit_domain(make_family(n))
    assert all(dom.checks.values()), dom.checks
    # float oracle: centers p_k/q_k converge to z_inf, d_k/q_k to V(z_inf)
    s = generate_steps(make_family(n), 14)[-1]
    assert abs(s.p / s.q - float(dom.z_inf)) < 1e-12
    assert abs(s.d / s.q - float(dom.v_inf)) < 1e-12
    # mpmath oracle for the accumulation point from Per and Vol
    mpmath.mp.dps = 40
    per, vol = mpmath.mpf(float(dom.per)), mpmath.mpf(float(dom.vol))
    c = per ** 2 / vol - 2
    assert abs((c + mpmath.sqrt(c * c - 4)) / 2 - float(dom.z_inf)) < 1e-9


def test_limit_domain_values_n0():
    dom = limit_domain(make_family(0))
    r = math.sqrt(21)
    assert abs(float(dom.z_inf) - (29 + 3 * r) / (13 + r)) < 1e-14
    assert abs(float(dom.cuts[0]) - (2 / (17 + r) + 0.5)) < 1e-14


@pytest.mark.parametrize("n", NS)
def test_perfect_and_obstructive(n):
    f = make_family(n)
    ok, rows = verify_perfect(f, 10)
    assert ok and all(tr.replay().nonzero() == (-1,) for _, _, tr in rows)
    ok, reports, increasing = verify_obstructive(f, 10)
    assert ok and increasing
    dom = limit_domain(f)
    assert all(r.ratio < dom.vol for r in reports)


@pytest.mark.parametrize("n", NS)
def test_companion_family(n):
    checks = matrix_relation_check(n, 10)
    assert all(checks.values()), checks
    for k in range(2, 7):
        v = companion_class(n, k)
        assert v.c1() == 1 and v.self_intersection() == -1
        assert is_exceptional(v)[0]


def test_overshadow_search_n3_empty():
    rep = overshadow_search(3, 18)
    assert rep.candidates == []
    assert all(c.reason for c in rep.arithmetic_survivors)
    wide = overshadow_search(3, 18, block_patterns=(0, 1, 10, 11))
    assert wide.candidates == [] and len(wide.arithmetic_survivors) >= len(rep.arithmetic_survivors)


def test_overshadow_rejects_negative_n():
    with pytest.raises(DomainError):
        overshadow_search(-1)


def test_blocking_class():
    for n in (0, 3):
        assert blocking_class_check(n)["passes_through"]


def test_ghost_stairs_silver_ratio():
    alpha = Surd(1, 1, 2)
    rep = ghost_stairs(alpha, 6)
    assert rep.k == 2 and rep.e_prime_on_interval
    assert [r.p for r in rep.rows[:3]] == [5, 12, 29]
    assert all(r.matches and r.below_reference for r in rep.rows)
    assert all(r.below_e_prime for r in rep.rows if r.n % 2)
    with pytest.raises(DomainError):
        ghost_stairs(Surd(Fraction(5, 2)), 3)
    with pytest.raises(DomainError):
        ghost_stairs(Surd(0, 1, 2) - 1, 3)


def test_reports_and_csv():
    reps = step_reports(3, 6)
    assert all(r.quasi_perfect and r.perfect and r.obstructive for r in reps)
    assert set(reps[0].to_json()) == {"n", "k", "center", "quasi_perfect", "perfect",
                                      "obstructive", "mu_center", "V_center"}
    text = centers_csv(3, 6)
    lines = text.splitlines()
    assert lines[0] == "k,p,q,center,z_inf,gap" and len(lines) == 8
    gaps = [abs(float(l.split(",")[-1])) for l in lines[1:]]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
