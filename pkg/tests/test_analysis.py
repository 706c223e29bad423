import math

import numpy as np
import pytest

from rootlab.analysis import (EvaluationGrid, antiderivative_demo,
                              centering_check, circle_grid,
                              count_derivative_roots_in, count_in_region,
                              gauss_lucas_check, heredity_check,
                              potential_discrepancy, root_distribution,
                              roots_of_derivative, theorem_bound_check,
                              weakstar_convergence_check)
from rootlab.errors import (AtomOnGridError, RegionTouchesSupportError,
                            RootlabError)
from rootlab.families import (CantorIFS, ChebyshevSegment, Iterates,
                              PowersUnity)
from rootlab.measures import (ArcsineSegment, CantorHausdorff,
                              JuliaEquilibrium, UniformCircle)
from rootlab.polycore import CoeffPoly
from rootlab.regions import Annulus, Disk
from rootlab.roots import RootSet, aberth_solve


# ---------------------------------------------------------------------------
# grids, distributions, counts


def test_circle_grid_margin():
    g = circle_grid(0j, 3.0, 16, UniformCircle())
    assert len(g.points) == 16
    assert g.margin == pytest.approx(2.0)
    with pytest.raises(RegionTouchesSupportError):
        EvaluationGrid((1.0,), 0.0)


def test_root_distribution_and_count():
    rs = RootSet.from_points([1.0, -1.0, 1.0])
    mu = root_distribution(rs)
    assert mu.weights.sum() == pytest.approx(1.0)
    assert count_in_region(rs, Disk(1.0, 0.1)) == 2


def test_count_derivative_roots_paths_agree():
    # exact structure, root-informed winding, and structural winding must
    # all see the single derivative root in the central gap
    member = CantorIFS().generate(4)
    disk = Disk(0.5, 1 / 12)
    via_roots = count_derivative_roots_in(member, 1, disk)
    from rootlab.families import FamilyMember
    stripped = FamilyMember(member.k, member.n_k, member.poly)
    via_structure = count_derivative_roots_in(stripped, 1, disk)
    assert via_roots == via_structure == 1


def test_roots_of_derivative_m2():
    member = ChebyshevSegment(schedule=[8]).generate(0)
    rs = roots_of_derivative(member, 2)
    assert rs.total == 6
    dd = np.polyder(np.poly(member.exact_roots.expanded_points()), 2)
    for p in rs.points():
        assert abs(np.polyval(dd, p)) < 1e-7


# ---------------------------------------------------------------------------
# discrepancy


def test_discrepancy_roots_of_unity():
    # the empirical potential of z^n - 1 matches log|z| up to log(|z^n-1|/|z|^n)/n
    n = 64
    rs = RootSet.from_points(list(np.exp(2j * np.pi * np.arange(n) / n)))
    target = UniformCircle()
    grid = circle_grid(0j, 2.0, 32, target)
    rep = potential_discrepancy(root_distribution(rs), target, grid)
    bound = max(abs(math.log(abs(z ** n - 1)) / n - math.log(abs(z)))
                for z in grid.points)
    assert rep.details["sup"] <= bound + 1e-12
    assert rep.details["sup"] <= math.log(2.0) / n  # |z|=2: sup <= log2/n
    assert rep.details["mean"] <= rep.details["sup"]


def test_discrepancy_rejects_atom_on_grid():
    rs = RootSet.from_points([2.0])
    grid = EvaluationGrid((2.0 + 1e-12j,), 1.0)
    with pytest.raises(AtomOnGridError):
        potential_discrepancy(root_distribution(rs), UniformCircle(), grid)


# ---------------------------------------------------------------------------
# centering and heredity


def test_centering_cantor_gap():
    rep = centering_check(CantorIFS(), Disk(0.5, 1 / 12), range(2, 8))
    assert rep.verdict
    assert rep.details["max_count"] == 0


def test_centering_detects_growth():
    # derivative roots of z^{2^k} - 1 pile up at the origin: not bounded
    rep = centering_check(PowersUnity(), Disk(0j, 0.5), range(2, 7), m=1)
    assert not rep.verdict
    counts = [c for (_, _, c) in rep.rows]
    assert counts == [2 ** k - 1 for k in range(2, 7)]


def test_heredity_powers_unity_annulus():
    # away from the origin and the circle, every derivative order is clear
    rep = heredity_check(PowersUnity(), [Annulus(0j, 0.25, 0.75)], 3,
                         range(2, 7))
    assert rep.verdict
    assert all(v == 0 for v in rep.details["max_counts"].values())


def test_heredity_reports_per_order_counts():
    rep = heredity_check(CantorIFS(), [Disk(2.0, 0.5)], 2, range(2, 6))
    assert rep.verdict
    assert set(rep.details["max_counts"]) == {"m0_L0", "m1_L0", "m2_L0"}


# ---------------------------------------------------------------------------
# the zero-count bound with the critical-point term


def test_theorem_cantor_gap():
    A = Disk(0.5, 1 / 12)
    rep = theorem_bound_check(CantorIFS(), A, 1 / 24, range(3, 7),
                              CantorHausdorff())
    assert rep.verdict
    assert rep.details["M"] == 1
    assert rep.first_valid_k == 3
    for (_, _, d_a, c_ae, d_ae, c_a, M, ok) in rep.rows:
        assert (d_a, c_ae, d_ae, c_a, M, ok) == (1, 0, 1, 0, 1, 1)


def test_theorem_circle_iterates():
    # z^2 dynamics: no roots or critical points outside the unit circle
    # (inside it the Cauchy transform vanishes identically, so probe outside)
    A = Disk(2.0, 0.3)
    rep = theorem_bound_check(Iterates(CoeffPoly([0, 0, 1.0])), A, 0.1,
                              range(1, 5), UniformCircle())
    assert rep.verdict
    assert rep.details["M"] == 0


# ---------------------------------------------------------------------------
# weak-star convergence


def test_weakstar_iterates_to_julia():
    # backward orbits of z^2 - 1 equidistribute to the equilibrium measure
    # of its Julia set
    target = JuliaEquilibrium(CoeffPoly([-1.0, 0, 1.0]))
    grid = circle_grid(0j, 3.0, 24, target)
    rep = weakstar_convergence_check(
        Iterates(CoeffPoly([-1.0, 0, 1.0])), target, grid, range(2, 6),
        tolerance=1e-2)
    assert rep.verdict
    sups = [s for (_, _, s, _) in rep.rows]
    assert sups[-1] <= 1e-2
    assert sups == sorted(sups, reverse=True)


def test_weakstar_negative_control():
    # all derivative roots of z^n - 1 sit at 0; at the probe z = 1/2 the
    # discrepancy against the circle is exactly log 2, forever
    target = UniformCircle()
    grid = EvaluationGrid((0.5 + 0j,), 0.5)
    rep = weakstar_convergence_check(PowersUnity(), target, grid,
                                     range(2, 6), m=1, tolerance=1e-2)
    assert not rep.verdict
    for (_, _, sup, _) in rep.rows:
        assert sup == pytest.approx(math.log(2.0), abs=1e-12)


def test_weakstar_first_valid_k():
    target = ArcsineSegment()
    grid = circle_grid(0j, 3.0, 16, target)
    rep = weakstar_convergence_check(ChebyshevSegment(schedule=[4, 8, 16, 32]),
                                     target, grid, range(4), tolerance=1e-2)
    assert rep.verdict
    assert rep.first_valid_k is not None


# ---------------------------------------------------------------------------
# Gauss-Lucas


def test_gauss_lucas_examples():
    p = CoeffPoly([-1.0, 0, 0, 0, 0, 0, 0, 0, 1.0])
    assert gauss_lucas_check(aberth_solve(p), aberth_solve(p.deriv_coeffs()))
    # a counterexample set: derivative root claimed far outside the hull
    rs = RootSet.from_points([1.0, -1.0, 1j])
    assert not gauss_lucas_check(rs, RootSet.from_points([5.0]))
    # degenerate hulls: collinear roots and a single repeated root
    seg = RootSet.from_points([-1.0, 0.0, 1.0])
    assert gauss_lucas_check(seg, RootSet.from_points([-0.3, 0.6]))
    assert not gauss_lucas_check(seg, RootSet.from_points([0.5j]))


# ---------------------------------------------------------------------------
# antiderivative demonstration


def test_antideriv_demo():
    rep = antiderivative_demo(CantorIFS(), range(2, 8))
    assert rep.verdict
    for (_, _, in_disk, dcount, _, _) in rep.rows:
        assert in_disk == 0 and dcount >= 1
    dists = [d for (_, _, _, _, d, _) in rep.rows]
    for a, b in zip(dists, dists[1:]):
        assert b / a == pytest.approx(1 / 3, abs=0.09)


def test_antideriv_demo_requires_ifs():
    with pytest.raises(RootlabError):
        antiderivative_demo(PowersUnity(), range(2, 4))


# ---------------------------------------------------------------------------
# identity oracle: everything agrees on a fully solvable member


def test_identity_oracle_midsize():
    fam = ChebyshevSegment(schedule=[512])
    member = fam.generate(0)
    target = ArcsineSegment()
    grid = circle_grid(0j, 3.0, 32, target)
    rep = potential_discrepancy(root_distribution(member.exact_roots),
                                target, grid)
    # monic minimizers on [-2,2]: sup discrepancy log 2 / n at worst
    assert rep.details["sup"] <= math.log(2.0) / 512
    # counting agreement between exact roots and winding on a window
    disk = Disk(1.0, 0.25)
    assert count_derivative_roots_in(member, 0, disk) == \
        member.exact_roots.count_in(disk)
