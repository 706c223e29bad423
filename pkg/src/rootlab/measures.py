"""Empirical and analytic measures on the plane.

:class:`DiscreteMeasure` holds weighted point masses (root distributions and
Dirac masses); the :class:`TargetMeasure` variants are the analytic limit
measures with closed-form or recursion-based logarithmic potentials and
Cauchy transforms, a support-distance lower bound, and a seeded sampler.
"""
from __future__ import annotations

import cmath
import math
import warnings
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .errors import (AtAtomError, InsideSupportError,
                     RegionTouchesSupportError, RootlabError, TruncationWarning)
from .polycore import CoeffPoly
from .regions import Region
from .roots import RootSet, _solve_preimages, isolate_zeros_of_function
from .scaled import SC, sc_from

__all__ = [
    "DiscreteMeasure", "TargetMeasure", "UniformCircle", "WeightedCircles",
    "ArcsineSegment", "CantorHausdorff", "JuliaEquilibrium",
    "potential_discrete", "cauchy_discrete", "critical_points_in_region",
    "dirac",
]


# ---------------------------------------------------------------------------
# discrete measures


class DiscreteMeasure:
    """Weighted point masses; weights sum to 1.

    Atoms closer than the merge radius are combined (weights added), which
    absorbs the multiplicity clusters produced by numeric root finders.
    """

    def __init__(self, atoms: Sequence[Tuple[complex, float]],
                 merge_radius: float = 1e-10):
        pts = np.array([complex(p) for p, _ in atoms], dtype=complex)
        wts = np.array([float(w) for _, w in atoms], dtype=float)
        if len(pts) == 0:
            raise RootlabError("measure needs at least one atom")
        if np.any(wts <= 0):
            raise RootlabError("weights must be positive")
        total = wts.sum()
        if abs(total - 1.0) > 1e-12:
            raise RootlabError(f"weights sum to {total}, not 1")
        pts, wts = _merge_atoms(pts, wts, merge_radius)
        order = np.lexsort((np.round(pts.imag, 12), np.round(pts.real, 12)))
        self.points = pts[order]
        self.weights = wts[order]

    @staticmethod
    def from_rootset(rs: RootSet) -> "DiscreteMeasure":
        n = rs.total
        return DiscreteMeasure([(p, m / n) for p, m in rs.roots])

    def __len__(self):
        return len(self.points)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("re,im,weight\n")
            for p, w in zip(self.points, self.weights):
                fh.write(f"{p.real:.12g},{p.imag:.12g},{w:.12g}\n")


def dirac(a: complex) -> DiscreteMeasure:
    return DiscreteMeasure([(a, 1.0)])


def _merge_atoms(pts, wts, radius):
    if radius <= 0 or len(pts) < 2:
        return pts, wts
    order = np.argsort(pts.real, kind="stable")
    parent = np.arange(len(pts))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    p_sorted = pts[order]
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if p_sorted[b].real - p_sorted[a].real > radius:
                break
            if abs(p_sorted[a] - p_sorted[b]) <= radius:
                parent[find(order[a])] = find(order[b])
    roots = np.array([find(i) for i in range(len(pts))])
    out_p, out_w = [], []
    for g in np.unique(roots):
        sel = roots == g
        w = wts[sel].sum()
        out_p.append(np.sum(pts[sel] * wts[sel]) / w)
        out_w.append(w)
    return np.array(out_p, dtype=complex), np.array(out_w, dtype=float)


def potential_discrete(mu: DiscreteMeasure, z: complex) -> float:
    """Sum of w_j log|z - z_j|; -inf when z coincides with an atom."""
    d = np.abs(complex(z) - mu.points)
    if np.any(d == 0):
        return -math.inf
    return float(np.dot(mu.weights, np.log(d)))


def cauchy_discrete(mu: DiscreteMeasure, z: complex) -> complex:
    """Sum of w_j / (z - z_j)."""
    diff = complex(z) - mu.points
    if np.any(diff == 0):
        raise AtAtomError(f"{z} is an atom of the measure")
    return complex(np.dot(mu.weights, 1.0 / diff))


def _cauchy_deriv_discrete(mu: DiscreteMeasure, z: complex) -> complex:
    diff = complex(z) - mu.points
    return complex(-np.dot(mu.weights, 1.0 / diff ** 2))


# ---------------------------------------------------------------------------
# target measures


class TargetMeasure:
    """Analytic limit measure: potential, Cauchy transform, sampler.

    ``division_note`` documents the complement division under which the
    measure satisfies the limit theorems; it is documentation, not a
    verified certificate (the conditions quantify over all components of an
    open set and are not checkable from samples).
    """

    kind: str
    support_radius: float
    division_note: str

    def potential(self, z: complex) -> float:
        raise NotImplementedError

    def cauchy(self, z: complex) -> complex:
        raise NotImplementedError

    def cauchy_deriv(self, z: complex) -> complex | None:
        """d/dz of the Cauchy transform; None when no cheap form exists."""
        return None

    def distance_to_support(self, z: complex) -> float:
        """Lower bound on the distance from z to the support."""
        raise NotImplementedError

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        raise NotImplementedError


class UniformCircle(TargetMeasure):
    """Arclength equidistribution on |z| = r."""

    kind = "circle"
    division_note = ("noble with V_1 = D(0, r): the only bounded complement "
                     "component carries no mass and the circle is m2-null")

    def __init__(self, r: float = 1.0):
        if r <= 0:
            raise RootlabError("radius must be positive")
        self.r = float(r)
        self.support_radius = float(r)

    def potential(self, z):
        return math.log(max(abs(z), self.r))

    def cauchy(self, z):
        a = abs(z)
        if a == self.r:
            raise InsideSupportError("on the circle")
        return 1.0 / z if a > self.r else 0j

    def cauchy_deriv(self, z):
        return -1.0 / (z * z) if abs(z) > self.r else 0j

    def distance_to_support(self, z):
        return abs(abs(z) - self.r)

    def sample(self, n, seed=0):
        rng = np.random.default_rng(seed)
        return self.r * np.exp(2j * np.pi * rng.random(n))


class WeightedCircles(TargetMeasure):
    """Circles |z| = 1 + 1/j with weights w_j, truncated at J and renormalized.

    Default weights w_j proportional to 2^-j.
    """

    kind = "circles"
    division_note = ("noble with V_j = D(0, 1 + 1/j): the unit circle "
                     "carries no mass of the truncated measure")

    def __init__(self, truncation: int = 40,
                 weights: Sequence[float] | None = None):
        if truncation < 1:
            raise RootlabError("truncation must be >= 1")
        self.truncation = int(truncation)
        if weights is None:
            w = 0.5 ** np.arange(1, truncation + 1)
            # renormalization hides a 2^-J tail; warn when it is sizable
            if 0.5 ** truncation > 1e-9:
                warnings.warn("weight tail exceeds 1e-9 after truncation",
                              TruncationWarning)
        else:
            w = np.asarray(weights, dtype=float)
            if len(w) != truncation or np.any(w <= 0):
                raise RootlabError("need `truncation` positive weights")
        self.weights = w / w.sum()
        self.radii = 1.0 + 1.0 / np.arange(1, truncation + 1)
        self.support_radius = 2.0

    def potential(self, z):
        return float(np.dot(self.weights,
                            np.log(np.maximum(abs(z), self.radii))))

    def cauchy(self, z):
        a = abs(z)
        if np.any(a == self.radii):
            raise InsideSupportError("on one of the circles")
        mass = float(self.weights[a > self.radii].sum())
        return mass / z if mass else 0j

    def cauchy_deriv(self, z):
        mass = float(self.weights[abs(z) > self.radii].sum())
        return -mass / (z * z) if mass else 0j

    def distance_to_support(self, z):
        return float(np.min(np.abs(abs(z) - self.radii)))

    def sample(self, n, seed=0):
        rng = np.random.default_rng(seed)
        j = rng.choice(len(self.radii), size=n, p=self.weights)
        return self.radii[j] * np.exp(2j * np.pi * rng.random(n))


class ArcsineSegment(TargetMeasure):
    """Arcsine (equilibrium) distribution on the segment [-2, 2]."""

    kind = "arcsine"
    division_note = ("noble with the trivial division: the complement of "
                     "[-2,2] is connected, so no bounded components occur")

    support_radius = 2.0

    def _w(self, z: complex) -> complex:
        # inverse Joukowski branch with |w| >= 1
        s = cmath.sqrt(z * z - 4)
        if abs(z + s) < abs(z - s):
            s = -s
        return (z + s) / 2, s

    def potential(self, z):
        w, _ = self._w(complex(z))
        return math.log(abs(w))

    def cauchy(self, z):
        z = complex(z)
        if z.imag == 0 and abs(z.real) <= 2:
            raise InsideSupportError("on the segment")
        _, s = self._w(z)
        return 1.0 / s

    def cauchy_deriv(self, z):
        _, s = self._w(complex(z))
        return -z / s ** 3

    def distance_to_support(self, z):
        x = min(max(z.real, -2.0), 2.0)
        return math.hypot(z.real - x, z.imag)

    def sample(self, n, seed=0):
        rng = np.random.default_rng(seed)
        return 2.0 * np.cos(np.pi * rng.random(n)) + 0j


_LOG3 = math.log(3.0)


class CantorHausdorff(TargetMeasure):
    """Normalized s-dimensional Hausdorff measure on the middle-third
    Cantor set, s = log 2 / log 3.

    Self-similarity under h1(z) = z/3, h2(z) = (z+2)/3 gives the exact
    recursions (derived from mu = (h1*mu + h2*mu)/2):

        p(z) = (p(3z) + p(3z-2))/2 - log 3
        c(z) = (3/2) (c(3z) + c(3z-2))
        c'(z) = (9/2) (c'(3z) + c'(3z-2))

    terminating in the far field |z - 1/2| >= 1e6 with the barycenter
    approximations p ~ log|z - 1/2|, c ~ 1/(z - 1/2), c' ~ -1/(z - 1/2)^2.
    The c recursion is validated against finite differences of p in the
    test suite.
    """

    kind = "cantor"
    division_note = ("noble with the trivial division: the complement of "
                     "the Cantor set is connected (no bounded components "
                     "carry mass; the set itself is m2-null)")

    support_radius = 1.0
    _FAR = 1e6

    def _expand(self, z: complex, max_depth: int = 60):
        """Leaf arguments and split depth shared by all three recursions."""
        zs = np.array([complex(z)])
        depth = np.array([0])
        out_z: List[np.ndarray] = []
        out_d: List[np.ndarray] = []
        for _ in range(max_depth + 1):
            far = np.abs(zs - 0.5) >= self._FAR
            if far.any():
                out_z.append(zs[far])
                out_d.append(depth[far])
            zs, depth = zs[~far], depth[~far]
            if len(zs) == 0:
                return np.concatenate(out_z), np.concatenate(out_d)
            zs = np.concatenate([3.0 * zs, 3.0 * zs - 2.0])
            depth = np.concatenate([depth + 1, depth + 1])
        raise InsideSupportError(
            f"{z} is too close to the Cantor set for the recursion")

    def potential(self, z):
        leaf, depth = self._expand(z)
        w = 0.5 ** depth
        # unrolling the recursion charges each leaf -depth * weight * log 3
        return float(np.dot(w, np.log(np.abs(leaf - 0.5)))
                     - _LOG3 * np.dot(w, depth))

    def cauchy(self, z):
        leaf, depth = self._expand(z)
        return complex(np.dot(1.5 ** depth, 1.0 / (leaf - 0.5)))

    def cauchy_deriv(self, z):
        leaf, depth = self._expand(z)
        return complex(np.dot(4.5 ** depth, -1.0 / (leaf - 0.5) ** 2))

    def distance_to_support(self, z, depth: int = 30):
        """Branch-and-bound over the level-d covering intervals; the result
        is a lower bound on the true distance, short of it by < 3^-depth."""
        z = complex(z)
        lows = [0.0]
        length = 1.0
        dmin = _dist_to_interval(z, 0.0, 1.0)
        for _ in range(depth):
            length /= 3.0
            children = [lo + off for lo in lows for off in (0.0, 2 * length)]
            dists = [_dist_to_interval(z, lo, lo + length) for lo in children]
            dmin = min(dists)
            # the nearest interval holds a point within dmin + length, so
            # anything farther than that can never win
            lows = [lo for lo, d in zip(children, dists) if d <= dmin + length]
            if dmin > 10 * length:
                break
        return dmin

    def sample(self, n, seed=0, depth: int = 40):
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=(n, depth))
        scales = 2.0 * 3.0 ** -np.arange(1, depth + 1)
        return bits @ scales + 0j


def _dist_to_interval(z: complex, lo: float, hi: float) -> float:
    x = min(max(z.real, lo), hi)
    return math.hypot(z.real - x, z.imag)


class JuliaEquilibrium(TargetMeasure):
    """Equilibrium measure of the Julia set of a degree >= 2 polynomial.

    The potential is the escape-time Green's function shifted by the
    logarithmic capacity |leading|^(-1/(d-1)); orbits run in
    magnitude-tracked arithmetic, so escape can continue far past the
    double-precision range and the truncation error is negligible.
    """

    kind = "julia"

    def __init__(self, q: CoeffPoly, max_iter: int = 600):
        if isinstance(q, (list, tuple)):
            q = CoeffPoly(q)
        if q.is_zero or q.degree < 2:
            raise RootlabError("need degree >= 2")
        self.q = q
        self.d = q.degree
        self.max_iter = max_iter
        g = q.leading
        self._log_cap = -math.log(abs(g)) / (self.d - 1)
        # filled Julia set is contained in D(0, R) with this Cauchy bound
        self.support_radius = 1.0 + sum(abs(c / g) for c in q.coeffs[:-1])
        self._coeffs_sc = [sc_from(c) for c in q.coeffs[::-1]]
        self.division_note = (
            "noble with V_j = bounded Fatou components: the equilibrium "
            "measure lives on the Julia set boundary and charges no "
            "bounded component")

    def _step(self, w: SC) -> SC:
        acc = SC(0j)
        for c in self._coeffs_sc:
            acc = acc * w + c
        return acc

    def green(self, z: complex) -> Tuple[float, bool]:
        """(Green's function of the basin of infinity, escaped flag)."""
        w = sc_from(complex(z))
        d = self.d
        esc_log = max(math.log(1e8), math.log(2.0 * self.support_radius))
        for k in range(self.max_iter):
            if not w.is_zero and w.log_abs() >= esc_log:
                # push two more steps so the tail correction is ~1e-16
                for _ in range(2):
                    w = self._step(w)
                    k += 1
                log_g = math.log(abs(self.q.leading))
                # log|w_{j+1}| ~ d log|w_j| + log|gamma| once escaped, so the
                # shifted quantity is geometric and the division is exact up
                # to the tail; no further shift (the Green's function behaves
                # like log|z| - log cap at infinity)
                return (w.log_abs() + log_g / (d - 1)) / d ** k, True
            w = self._step(w)
        return 0.0, False

    def potential(self, z):
        g, _ = self.green(z)
        return g + self._log_cap

    def cauchy(self, z):
        g, esc = self.green(z)
        if not esc:
            raise InsideSupportError("inside the filled Julia set")
        # no closed form: complex gradient 2 d/dz by central differences
        h = 1e-5 * (1.0 + abs(z))
        px = self.potential(z + h) - self.potential(z - h)
        py = self.potential(z + 1j * h) - self.potential(z - 1j * h)
        return complex(px, -py) / (2 * h)

    def distance_to_support(self, z):
        # conservative: the filled set sits in D(0, support_radius), and no
        # cheap positive bound exists for points inside that disk
        return max(abs(z) - self.support_radius, 0.0)

    def sample(self, n, seed=0, burn_in: int = 30):
        rng = np.random.default_rng(seed)
        if self.d == 2:
            return self._sample_quadratic(n, rng, burn_in)
        out = np.empty(n, dtype=complex)
        for i in range(n):
            w = complex(self.support_radius + 1.0)
            for depth in range(burn_in):
                rs = _solve_preimages(self.q, w, seed=seed + depth)
                pts = rs.expanded_points()
                w = pts[rng.integers(0, len(pts))]
            out[i] = w
        return out

    def _sample_quadratic(self, n, rng, burn_in):
        c0, c1, c2 = (list(self.q.coeffs) + [0, 0])[:3]
        w = np.full(n, self.support_radius + 1.0, dtype=complex)
        for _ in range(burn_in + 10):
            # solve c2 v^2 + c1 v + (c0 - w) = 0, random branch per sample
            disc = np.sqrt(c1 * c1 - 4.0 * c2 * (c0 - w))
            sign = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            w = (-c1 + sign * disc) / (2.0 * c2)
        return w


# ---------------------------------------------------------------------------
# critical points of the potential


def _require_clearance(mu, region: Region) -> None:
    if isinstance(mu, DiscreteMeasure):
        for p in mu.points:
            if region.distance(p) <= 0:
                raise RegionTouchesSupportError(
                    f"atom {p} lies in or on the probe region")
        return
    for z in region.probe_points():
        if mu.distance_to_support(z) <= 0:
            raise RegionTouchesSupportError(
                f"region boundary point {z} touches the support")
    # a clear boundary does not rule out support strictly inside the region
    for z in mu.sample(256, seed=0):
        if region.contains(complex(z)):
            raise RegionTouchesSupportError(
                f"support point {z} lies inside the probe region")


def critical_points_in_region(mu, region: Region,
                              radius: float = 1e-8,
                              seed: int = 0) -> Tuple[int, List[complex]]:
    """Zeros of the Cauchy transform in a region: the critical points of
    the potential off the support, with multiplicity."""
    _require_clearance(mu, region)
    if isinstance(mu, DiscreteMeasure):
        cauchy = lambda z: cauchy_discrete(mu, z)
        cderiv = lambda z: _cauchy_deriv_discrete(mu, z)
    else:
        cauchy = mu.cauchy
        probe = mu.cauchy_deriv(region.boundary_loops()[0](0.0))
        cderiv = mu.cauchy_deriv if probe is not None else None

    def direction(z: complex):
        v = cauchy(z)
        if v == 0:
            return -math.inf, 0.0, 0.0
        g = abs(cderiv(z) / v) if cderiv is not None else 0.0
        return math.log(abs(v)), cmath.phase(v), g

    def newton(z0: complex):
        if cderiv is None:
            return None
        z = z0
        for _ in range(60):
            v, dv = cauchy(z), cderiv(z)
            if v == 0:
                return z
            if dv == 0:
                return None
            step = v / dv
            z -= step
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                return z
        return z

    rs = isolate_zeros_of_function(direction, region, radius,
                                   newton_fn=newton, seed=seed)
    return rs.total, [p for p, m in rs.roots for _ in range(m)]
