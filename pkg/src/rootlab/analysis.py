"""Checkers that turn root sets into measures and verify the asymptotic
claims: centering, the zero-count bounds with the critical-point term M,
heredity across derivative orders, and weak-star convergence certified via
potentials on grids with positive margin.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (AtomOnGridError, DegreeCapExceededError,
                     RegionTouchesSupportError, RootlabError)
from .families import FamilyMember, FamilySpec, CantorIFS, roots_of
from .measures import (CantorHausdorff, DiscreteMeasure, TargetMeasure,
                       critical_points_in_region, potential_discrete)
from .polycore import derivative, expand
from .regions import Disk, Region
from .roots import (RootSet, aberth_solve, direction_from_roots,
                    winding_count, winding_of_function)

__all__ = [
    "EvaluationGrid", "Report", "CenteringReport", "TheoremReport",
    "DiscrepancyReport", "root_distribution", "count_in_region",
    "count_derivative_roots_in", "roots_of_derivative",
    "potential_discrepancy", "centering_check", "theorem_bound_check",
    "heredity_check", "weakstar_convergence_check", "gauss_lucas_check",
    "antiderivative_demo", "circle_grid",
]


# ---------------------------------------------------------------------------
# grids and reports


@dataclass(frozen=True)
class EvaluationGrid:
    """Probe points with a guaranteed clearance from a declared support."""

    points: tuple
    margin: float

    def __post_init__(self):
        if self.margin <= 0:
            raise RegionTouchesSupportError("grid margin must be positive")


def circle_grid(center: complex, r: float, n: int,
                target: TargetMeasure | None = None) -> EvaluationGrid:
    """n equally spaced points on |z - center| = r; margin from the target's
    support-distance bound when one is given, else from the radius."""
    pts = tuple(center + r * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n))
    if target is None:
        margin = r
    else:
        margin = min(target.distance_to_support(z) for z in pts)
    return EvaluationGrid(pts, margin)


@dataclass
class Report:
    name: str
    columns: List[str]
    rows: List[tuple]
    verdict: bool
    tolerance: Optional[float] = None
    first_valid_k: Optional[int] = None
    details: Dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_csv_cell(v) for v in row) + "\n")

    def summary(self) -> Dict:
        out = {"subcommand": self.name,
               "verdict": "pass" if self.verdict else "fail",
               "tolerance": self.tolerance,
               "first_valid_k": self.first_valid_k}
        out.update({k: v for k, v in self.details.items()})
        return out

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.summary(), fh, indent=2, default=str)
            fh.write("\n")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}i"
    return str(v)


class CenteringReport(Report):
    pass


class TheoremReport(Report):
    pass


class DiscrepancyReport(Report):
    pass


# ---------------------------------------------------------------------------
# measures from root sets


def root_distribution(rs: RootSet) -> DiscreteMeasure:
    if rs.total < 1:
        raise RootlabError("empty root set")
    return DiscreteMeasure.from_rootset(rs)


def count_in_region(rs: RootSet, region: Region) -> int:
    return rs.count_in(region)


def count_derivative_roots_in(member: FamilyMember, m: int, region: Region,
                              seed: int = 0) -> int:
    """Roots of q_k^{(m)} in a region: exact counting when roots are known,
    root-informed winding otherwise, structural winding as a last resort."""
    if m == 0:
        if member.exact_roots is not None:
            return member.exact_roots.count_in(region)
        return winding_count(member.poly, region, seed=seed)
    exact = member.spec.derivative_roots(member, m) \
        if member.spec is not None else None
    if exact is None and m == 1:
        exact = member.exact_derivative_roots
    if exact is not None:
        return exact.count_in(region)
    if member.exact_roots is not None:
        direction = direction_from_roots(
            member.exact_roots.points(), m,
            [mm for _, mm in member.exact_roots.roots])
        return winding_of_function(direction, region, seed=seed)
    return winding_count(derivative(member.poly, m), region, seed=seed)


def roots_of_derivative(member: FamilyMember, m: int,
                        seed: int = 0) -> RootSet:
    """Full root multiset of q_k^{(m)}."""
    if m == 0:
        return roots_of(member, seed=seed)
    exact = member.spec.derivative_roots(member, m) \
        if member.spec is not None else None
    if exact is None and m == 1:
        exact = member.exact_derivative_roots
    if exact is not None:
        return exact
    if member.n_k > 4096:
        raise DegreeCapExceededError(
            "no exact derivative structure and degree above the solve cap")
    if member.exact_roots is not None:
        # differentiate in root space: the critical points of prod (z - r_j)
        # are the eigenvalues of diag(r) (I - J/n) apart from the exact 0 of
        # the all-ones eigenvector; no monomial expansion, which would be
        # hopelessly ill-conditioned for clustered root sets
        start = member.exact_derivative_roots
        steps = m
        if start is not None and m >= 1:
            steps = m - 1
        else:
            start = member.exact_roots
        pts = np.asarray(start.expanded_points(), dtype=complex)
        for _ in range(steps):
            pts = _critical_points_of_roots(pts)
        return RootSet.from_points(list(pts), merge_radius=0.0)
    p = _deriv_np(np.array(expand(member.poly).coeffs), m)
    from .polycore import CoeffPoly
    return aberth_solve(CoeffPoly(p), seed=seed)


def _deriv_np(ascending: np.ndarray, m: int) -> np.ndarray:
    for _ in range(m):
        ascending = ascending[1:] * np.arange(1, len(ascending))
    return ascending


def _critical_points_of_roots(r: np.ndarray) -> np.ndarray:
    if len(r) < 2:
        raise RootlabError("differentiation exhausts the root set")
    n = len(r)
    # shift the hull strictly away from 0 so the spurious eigenvalue (exact
    # 0, eigenvector of all ones) is unambiguous; Gauss-Lucas keeps every
    # genuine eigenvalue inside the shifted hull
    shift = float(np.max(r.real)) + 1.0 + float(np.ptp(np.abs(r)))
    rs = r - shift
    A = np.diag(rs) - np.outer(rs, np.ones(n)) / n
    ev = np.linalg.eigvals(A)
    ev = np.delete(ev, int(np.argmin(np.abs(ev))))
    return ev + shift


# ---------------------------------------------------------------------------
# discrepancy


def potential_discrepancy(emp: DiscreteMeasure, target: TargetMeasure,
                          grid: EvaluationGrid) -> DiscrepancyReport:
    """Sup and mean of |empirical potential - target potential| on the grid."""
    diffs = []
    rows = []
    for z in grid.points:
        d = np.min(np.abs(z - emp.points))
        if d < grid.margin / 2:
            raise AtomOnGridError(f"atom within {d:.3g} of grid point {z}",
                                  point=z)
        e = potential_discrete(emp, z)
        t = target.potential(z)
        diffs.append(abs(e - t))
        rows.append((z, e, t, abs(e - t)))
    sup = max(diffs)
    mean = sum(diffs) / len(diffs)
    return DiscrepancyReport(
        name="discrepancy",
        columns=["z", "empirical", "target", "abs_diff"],
        rows=rows, verdict=True,
        details={"sup": sup, "mean": mean})


# ---------------------------------------------------------------------------
# checkers


def _k_list(k_range) -> List[int]:
    ks = list(k_range)
    if not ks:
        raise RootlabError("empty k range")
    return ks


def centering_check(spec: FamilySpec, L: Region, k_range,
                    m: int = 0, seed: int = 0) -> CenteringReport:
    """Counts roots of q_k^{(m)} in the closed set L per k.

    The Bounded verdict is a recorded heuristic -- the maximum count is
    attained before the last quarter of the observed range -- never a proof
    of the asymptotic property."""
    ks = _k_list(k_range)
    rows = []
    counts = []
    for k in ks:
        member = spec.generate(k)
        c = count_derivative_roots_in(member, m, L, seed=seed)
        rows.append((k, member.n_k, c))
        counts.append(c)
    mx = max(counts)
    first_at = counts.index(mx)
    bounded = first_at < len(counts) - max(1, len(counts) // 4)
    return CenteringReport(
        name="centering",
        columns=["k", "n_k", "count_in_L"],
        rows=rows, verdict=bounded,
        first_valid_k=ks[counts.index(mx)],
        details={"max_count": mx, "m": m,
                 "note": "Bounded verdict is a finite-range heuristic"})


def theorem_bound_check(spec: FamilySpec, A: Region, eps: float, k_range,
                        target: TargetMeasure,
                        seed: int = 0) -> TheoremReport:
    """Zero-count bounds with the critical-point term M.

    Per k, with A_eps the eps-dilation: the derivative-root count in A must
    eventually be at most the root count in A_eps plus M, and the
    derivative-root count in A_eps at least the root count in A plus M."""
    ks = _k_list(k_range)
    A_eps = A.dilate(eps)
    M, crit = critical_points_in_region(target, A, seed=seed)
    rows = []
    ok_flags = []
    for k in ks:
        member = spec.generate(k)
        lhs_up = count_derivative_roots_in(member, 1, A, seed=seed)
        rhs_up = count_derivative_roots_in(member, 0, A_eps, seed=seed) + M
        lhs_lo = count_derivative_roots_in(member, 1, A_eps, seed=seed)
        rhs_lo = count_derivative_roots_in(member, 0, A, seed=seed) + M
        ok = lhs_up <= rhs_up and lhs_lo >= rhs_lo
        rows.append((k, member.n_k, lhs_up, rhs_up - M, lhs_lo, rhs_lo - M,
                     M, int(ok)))
        ok_flags.append(ok)
    first = None
    for i in range(len(ks)):
        if all(ok_flags[i:]):
            first = ks[i]
            break
    return TheoremReport(
        name="theorem",
        columns=["k", "n_k", "dcount_A", "count_A_eps", "dcount_A_eps",
                 "count_A", "M", "ok"],
        rows=rows, verdict=first is not None, first_valid_k=first,
        details={"M": M, "critical_points": [str(c) for c in crit],
                 "eps": eps})


def heredity_check(spec: FamilySpec, L_regions: Sequence[Region],
                   m_max: int, k_range, seed: int = 0) -> CenteringReport:
    """Centering of every derivative order m <= m_max on regions away from
    the center set, aggregated into one verdict."""
    ks = _k_list(k_range)
    rows = []
    all_bounded = True
    max_counts = {}
    for m in range(m_max + 1):
        for i, L in enumerate(L_regions):
            sub = centering_check(spec, L, ks, m=m, seed=seed)
            all_bounded = all_bounded and sub.verdict
            max_counts[f"m{m}_L{i}"] = sub.details["max_count"]
            for (k, n_k, c) in sub.rows:
                rows.append((k, n_k, m, i, c))
    return CenteringReport(
        name="heredity",
        columns=["k", "n_k", "m", "region_index", "count_in_L"],
        rows=rows, verdict=all_bounded,
        details={"max_counts": max_counts})


def weakstar_convergence_check(spec: FamilySpec, target: TargetMeasure,
                               grid: EvaluationGrid, k_range, m: int = 0,
                               tolerance: float = 1e-2,
                               seed: int = 0) -> DiscrepancyReport:
    """Per-k sup potential discrepancy of the order-m derivative root
    distribution against the target; passes when the final sup is within
    tolerance and the last three values do not increase."""
    ks = _k_list(k_range)
    rows = []
    sups = []
    for k in ks:
        member = spec.generate(k)
        rs = roots_of_derivative(member, m, seed=seed)
        emp = root_distribution(rs)
        rep = potential_discrepancy(emp, target, grid)
        rows.append((k, member.n_k, rep.details["sup"], rep.details["mean"]))
        sups.append(rep.details["sup"])
    tail = sups[-3:]
    monotone = all(tail[i + 1] <= tail[i] * (1 + 1e-9) + 1e-15
                   for i in range(len(tail) - 1))
    verdict = sups[-1] <= tolerance and monotone
    first = None
    for k, s in zip(ks, sups):
        if s <= tolerance:
            first = k
            break
    return DiscrepancyReport(
        name="weakstar",
        columns=["k", "n_k", "sup_discrepancy", "mean_discrepancy"],
        rows=rows, verdict=verdict, tolerance=tolerance, first_valid_k=first,
        details={"m": m, "final_sup": sups[-1]})


# ---------------------------------------------------------------------------
# Gauss-Lucas


def _convex_hull(points: Sequence[complex]) -> List[complex]:
    pts = sorted(set((p.real, p.imag) for p in points))
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def half(ps):
        out = []
        for p in ps:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dist_outside_hull(z: complex, hull: List[complex]) -> float:
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) == 2:
        return _dist_to_segment(z, hull[0], hull[1])
    inside = True
    best = 0.0
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        cr = _cross((a.real, a.imag), (b.real, b.imag), (z.real, z.imag))
        if cr < 0:  # outside this edge (hull is counterclockwise)
            inside = False
            best = max(best, _dist_to_segment(z, a, b))
    return 0.0 if inside else best


def _dist_to_segment(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / abs(ab) ** 2
    t = min(max(t, 0.0), 1.0)
    return abs(z - (a + t * ab))


def gauss_lucas_check(rs: RootSet, drs: RootSet) -> bool:
    """Every derivative root inside the convex hull of the roots, dilated
    outward by 1e-9 to absorb floating-point fuzz."""
    hull = _convex_hull([p for p, _ in rs.roots])
    scale = 1.0 + max(abs(p) for p, _ in rs.roots)
    tol = 1e-9 * scale
    return all(_dist_outside_hull(p, hull) <= tol for p, _ in drs.roots)


# ---------------------------------------------------------------------------
# antiderivative demonstration


def antiderivative_demo(spec: CantorIFS, k_range, center: complex = 0.5,
                        radius: float = 1.0 / 12.0,
                        seed: int = 0) -> TheoremReport:
    """The zero/critical-point dichotomy in the central-gap disk, plus the
    geometric approach of root sets to the attractor.

    Per k: the member has no roots in D(center, radius) while its derivative
    has at least one, so no antiderivative sequence of the derivatives can
    center on the attractor; the Hausdorff distance between the root set and
    the depth-30 attractor decays with per-step ratio about 1/3."""
    if not isinstance(spec, CantorIFS):
        raise RootlabError("the demonstration is specific to the IFS family")
    ks = _k_list(k_range)
    disk = Disk(complex(center), radius)
    target = CantorHausdorff()
    anchor = _attractor_points(13)
    rows = []
    dists = []
    ok_all = True
    for k in ks:
        member = spec.generate(k)
        in_disk = count_derivative_roots_in(member, 0, disk, seed=seed)
        dcount = count_derivative_roots_in(member, 1, disk, seed=seed) \
            if member.n_k > 1 else 0
        pts = member.exact_roots.points()
        to_c = max(target.distance_to_support(p) for p in pts)
        from_c = float(np.min(np.abs(anchor[:, None] - pts[None, :]),
                              axis=1).max())
        d_k = max(to_c, from_c)
        dists.append(d_k)
        ratio = dists[-1] / dists[-2] if len(dists) > 1 else float("nan")
        ok = in_disk == 0 and dcount >= 1
        ok_all = ok_all and ok
        rows.append((k, member.n_k, in_disk, dcount, d_k, ratio))
    ratios = [r for (_, _, _, _, _, r) in rows[1:]]
    ratio_ok = all(0.25 <= r <= 0.42 for r in ratios) if ratios else True
    return TheoremReport(
        name="antideriv-demo",
        columns=["k", "n_k", "roots_in_disk", "deriv_roots_in_disk",
                 "hausdorff_distance", "step_ratio"],
        rows=rows, verdict=ok_all and ratio_ok,
        details={"center": complex(center), "radius": radius,
                 "ratio_window": [0.25, 0.42]})


def _attractor_points(depth: int) -> np.ndarray:
    """Endpoints of the level-`depth` covering intervals; exact members of
    the attractor within 3^-depth of any of its points."""
    lows = np.array([0.0])
    length = 1.0
    for _ in range(depth):
        length /= 3.0
        lows = np.concatenate([lows, lows + 2 * length])
    return np.unique(np.concatenate([lows, lows + length])) + 0j
