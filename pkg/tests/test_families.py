import math

import numpy as np
import pytest

from rootlab.errors import RootlabError, ScheduleExceededError
from rootlab.families import (CantorIFS, ChebyshevSegment, ExplicitList,
                              FamilyMember, Iterates, PowersUnity, RandomIID,
                              derivative_member, roots_of)
from rootlab.measures import UniformCircle
from rootlab.polycore import CoeffPoly, eval_jet, expand


def eval_member(member, z):
    return eval_jet(member.poly, z, 0).values[0]


# ---------------------------------------------------------------------------
# iterates


def test_iterates_generate():
    fam = Iterates(CoeffPoly([-2.0, 0.0, 1.0]))
    m = fam.generate(3)
    assert (m.k, m.n_k) == (3, 8)
    # q3(z) agrees with three explicit applications
    q = lambda z: z * z - 2
    for z in (0.3, 1.9, -0.7 + 0.2j):
        assert eval_member(m, z) == pytest.approx(q(q(q(z))))


def test_iterates_exact_roots_consistent():
    fam = Iterates(CoeffPoly([-1.0, 0.0, 1.0]))
    m = fam.generate(4)
    assert m.exact_roots.total == 16
    q = lambda z: z * z - 1
    for p in m.exact_roots.points():
        w = p
        for _ in range(4):
            w = q(w)
        assert abs(w) < 1e-10


def test_iterates_derivative_roots():
    fam = Iterates(CoeffPoly([-1.0, 0.0, 1.0]))
    m = fam.generate(3)
    # q_k' roots: points whose orbit hits the critical point 0 early
    assert m.exact_derivative_roots.total == m.n_k - 1
    node = expand(m.poly)
    dp = node.deriv_coeffs()
    for p, mult in m.exact_derivative_roots.roots:
        assert abs(dp(p)) <= 1e-8 * (1 + sum(abs(c) for c in dp.coeffs))


def test_iterates_root_bound():
    fam = Iterates(CoeffPoly([-2.0, 0.0, 1.0]))
    b = fam.root_bound()
    for k in (1, 2, 3, 4):
        assert max(abs(p) for p in fam.generate(k).exact_roots.points()) <= b


def test_iterates_rejects_low_degree():
    with pytest.raises(RootlabError):
        Iterates(CoeffPoly([1.0, 1.0]))
    with pytest.raises(ScheduleExceededError):
        Iterates(CoeffPoly([0, 0, 1.0])).generate(30)


# ---------------------------------------------------------------------------
# Cantor IFS


def test_cantor_generate_small():
    fam = CantorIFS()
    m = fam.generate(2)
    assert (m.k, m.n_k) == (2, 4)
    got = sorted(p.real for p in m.exact_roots.points())
    assert got == pytest.approx([1 / 18, 5 / 18, 13 / 18, 17 / 18])


def test_cantor_roots_satisfy_polynomial():
    m = CantorIFS().generate(6)
    assert m.exact_roots.total == 64
    # the leading coefficient is astronomically large, so judge the roots by
    # the Newton correction |q/q'| rather than the raw residual
    for p in m.exact_roots.points()[::7]:
        v, dv = eval_jet(m.poly, p, 1).values
        assert abs(v / dv) < 1e-14


def test_cantor_root_heredity():
    # roots of q_{k+1} are exactly the two affine images of roots of q_k
    fam = CantorIFS()
    a = fam.generate(3).exact_roots.points()
    b = fam.generate(4).exact_roots.points()
    images = sorted(list(a / 3.0) + list((a + 2.0) / 3.0),
                    key=lambda z: z.real)
    for x, y in zip(sorted(b, key=lambda z: z.real), images):
        assert x == pytest.approx(y, abs=1e-15)


def test_cantor_distance_contraction():
    # distance from any root to the attractor shrinks by 1/3 per level
    from rootlab.measures import CantorHausdorff
    c = CantorHausdorff()
    fam = CantorIFS()
    d_prev = None
    for k in range(2, 7):
        pts = fam.generate(k).exact_roots.points()
        d = max(c.distance_to_support(p) for p in pts)
        # roots are the gap midpoints of level k+1 cells, at distance
        # (1/6) 3^-k from the set
        assert d == pytest.approx(0.5 * 3.0 ** -(k + 1), rel=1e-6)
        if d_prev is not None:
            assert d / d_prev == pytest.approx(1 / 3, rel=1e-6)
        d_prev = d


def test_cantor_custom_seedling():
    fam = CantorIFS(CoeffPoly([2.0, 0.0, 1.0]))  # q0 = z^2 + 2
    m = fam.generate(1)
    assert m.n_k == 4
    for p in m.exact_roots.points():
        assert abs(eval_member(m, p)) < 1e-9


# ---------------------------------------------------------------------------
# random roots, Chebyshev, powers of unity


def test_random_iid_reproducible_and_on_target():
    fam = RandomIID(UniformCircle(), seed=9)
    a = fam.generate(2)
    b = fam.generate(2)
    assert np.array_equal(a.exact_roots.points(), b.exact_roots.points())
    assert a.n_k == 32
    assert np.allclose(np.abs(a.exact_roots.points()), 1.0)
    # factored representation matches the product at a probe point
    z = 2.0 + 0.5j
    direct = np.prod(z - a.exact_roots.points())
    assert eval_member(a, z) == pytest.approx(direct)


def test_random_iid_schedule():
    fam = RandomIID(UniformCircle(), schedule=[4, 6])
    assert fam.generate(1).n_k == 6
    with pytest.raises(ScheduleExceededError):
        fam.generate(2)


def test_chebyshev_values():
    fam = ChebyshevSegment(schedule=[8, 256])
    m = fam.generate(1)
    # T_n(w + 1/w) = w^n + w^-n, probed at z = 3
    w = (3 + math.sqrt(5)) / 2
    assert eval_member(m, 3.0) == pytest.approx(w ** 256 + w ** -256, rel=1e-12)
    assert abs(eval_member(m, m.exact_roots.points()[3])) < 1e-10


def test_chebyshev_derivative_roots():
    m = ChebyshevSegment(schedule=[8]).generate(0)
    dp = expand(m.poly).deriv_coeffs()
    assert m.exact_derivative_roots.total == 7
    for p in m.exact_derivative_roots.points():
        assert abs(dp(p)) < 1e-9


def test_powers_unity():
    fam = PowersUnity()
    m = fam.generate(3)
    assert m.n_k == 8
    assert m.exact_derivative_roots.roots == ((0j, 7),)
    assert fam.derivative_roots(m, 5).roots == ((0j, 3),)
    assert fam.derivative_roots(m, 8) is None


def test_explicit_list():
    fam = ExplicitList([[CoeffPoly([-1.0, 0, 1.0])], [0, 0, 1.0]][1:] +
                       [CoeffPoly([-1.0, 0, 1.0])])
    assert fam.generate(0).n_k == 2
    with pytest.raises(ScheduleExceededError):
        fam.generate(5)
    with pytest.raises(RootlabError):
        ExplicitList([CoeffPoly([3.0])])


# ---------------------------------------------------------------------------
# member-level operations


def test_derivative_member():
    m = ChebyshevSegment(schedule=[8]).generate(0)
    d = derivative_member(m)
    assert d.n_k == 7
    assert d.exact_roots.total == 7
    d2 = derivative_member(m, 2)
    assert d2.n_k == 6 and d2.exact_roots is None
    with pytest.raises(RootlabError):
        derivative_member(m, 8)


def test_roots_of_methods_agree():
    m = CantorIFS().generate(3)
    exact = roots_of(m, "exact")
    ab = roots_of(m, "aberth")
    qt = roots_of(m, "quadtree")
    for rs in (ab, qt):
        assert rs.total == exact.total
        for a, b in zip(sorted(exact.points(), key=lambda z: z.real),
                        sorted(rs.points(), key=lambda z: z.real)):
            assert abs(a - b) < 1e-7


def test_roots_of_auto_prefers_exact():
    m = PowersUnity().generate(2)
    assert roots_of(m, "auto") is m.exact_roots
    stripped = FamilyMember(m.k, m.n_k, m.poly)
    rs = roots_of(stripped, "auto")
    assert rs.total == 4
    with pytest.raises(RootlabError):
        roots_of(stripped, "exact")
