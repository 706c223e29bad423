"""Polynomial sequence generators.

Each family produces members (k, n_k, structural polynomial) and, where the
construction permits, exact root multisets for the member and its first
derivative.  Exact roots are what keep the high-degree counting and
discrepancy checks fast: winding directions and potentials can then be
evaluated from the root multiset instead of the coefficient DAG.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import (DegreeCapExceededError, RootlabError,
                     ScheduleExceededError)
from .polycore import (CoeffPoly, Compose, Dense, AffineArg, Product,
                       StructuralPoly, derivative, expand)
from .regions import Disk
from .roots import (RootSet, aberth_solve, backward_orbit,
                    isolate_and_polish, iterate_derivative_roots)

__all__ = ["FamilySpec", "FamilyMember", "Iterates", "CantorIFS", "RandomIID",
           "ChebyshevSegment", "PowersUnity", "ExplicitList",
           "derivative_member", "roots_of"]


@dataclass(frozen=True)
class FamilyMember:
    k: int
    n_k: int
    poly: StructuralPoly
    exact_roots: Optional[RootSet] = None
    exact_derivative_roots: Optional[RootSet] = None
    spec: Optional["FamilySpec"] = field(default=None, repr=False)


class FamilySpec:
    """Base: a recipe for a polynomial sequence with degrees -> infinity."""

    kind: str

    def generate(self, k: int) -> FamilyMember:
        raise NotImplementedError

    def root_bound(self) -> float:
        """R with all roots of every member inside D(0, R)."""
        raise NotImplementedError

    def derivative_roots(self, member: FamilyMember, m: int) -> Optional[RootSet]:
        """Exact roots of the m-th derivative when the structure gives them."""
        return member.exact_derivative_roots if m == 1 else None


class Iterates(FamilySpec):
    """q_k = q composed with itself k times, degree d^k."""

    kind = "iterates"

    def __init__(self, q: CoeffPoly, seed: int = 0):
        if isinstance(q, (list, tuple)):
            q = CoeffPoly(q)
        if q.is_zero or q.degree < 2:
            raise RootlabError("iterates need degree >= 2")
        self.q = q
        self.seed = seed

    def generate(self, k):
        if k < 1 or self.q.degree ** k > 2 ** 24:
            raise ScheduleExceededError(f"iterate index {k} out of range")
        node: StructuralPoly = Dense(self.q)
        for _ in range(k - 1):
            node = Compose(self.q, node)
        n_k = self.q.degree ** k
        exact = backward_orbit(self.q, 0j, k, seed=self.seed,
                               allow_exceptional=True)
        dexact = iterate_derivative_roots(self.q, k, seed=self.seed)
        return FamilyMember(k, n_k, node, exact, dexact, spec=self)

    def root_bound(self):
        q = self.q
        if q.degree == 2 and q.leading == 1 and q.coeffs[1] == 0:
            return 1.0 + math.sqrt(1.0 + abs(q.coeffs[0]))  # escape radius
        return 1.0 + sum(abs(c / q.leading) for c in q.coeffs[:-1])


class CantorIFS(FamilySpec):
    """q_{k+1}(z) = q_k(3z) q_k(3z - 2); roots are the IFS images
    h1(r) = r/3, h2(r) = (r+2)/3 of the roots of q0."""

    kind = "cantor-ifs"

    def __init__(self, q0: CoeffPoly = None, seed: int = 0):
        if q0 is None:
            q0 = CoeffPoly([-0.5, 1.0])
        if isinstance(q0, (list, tuple)):
            q0 = CoeffPoly(q0)
        if q0.is_zero or q0.degree < 1:
            raise RootlabError("q0 must have degree >= 1")
        self.q0 = q0
        self.seed = seed
        if q0.degree == 1:
            c0, c1 = q0.coeffs
            self._roots0 = RootSet.from_points([-c0 / c1])
        else:
            self._roots0 = aberth_solve(q0, seed=seed)

    def generate(self, k):
        if k < 0 or (2 ** k) * self.q0.degree > 2 ** 20:
            raise ScheduleExceededError(f"Cantor index {k} out of range")
        node: StructuralPoly = Dense(self.q0)
        pts = list(self._roots0.points())
        mults = [m for _, m in self._roots0.roots]
        for _ in range(k):
            node = Product([AffineArg(node, 3.0, 0.0),
                            AffineArg(node, 3.0, -2.0)])
            pts = [p / 3.0 for p in pts] + [(p + 2.0) / 3.0 for p in pts]
            mults = mults + mults
        exact = RootSet.from_points(pts, mults, merge_radius=0.0)
        return FamilyMember(k, node.degree, node, exact, spec=self)

    def root_bound(self):
        r0 = max(abs(p) for p in self._roots0.points())
        return max(1.0, r0)


class RandomIID(FamilySpec):
    """Monic polynomials with i.i.d. roots sampled from a target measure."""

    kind = "random-iid"

    def __init__(self, target, seed: int = 0,
                 schedule: Sequence[int] | None = None):
        self.target = target
        self.seed = seed
        self.schedule = list(schedule) if schedule is not None else None

    def _degree(self, k):
        if self.schedule is not None:
            if not 0 <= k < len(self.schedule):
                raise ScheduleExceededError(f"index {k} outside schedule")
            return self.schedule[k]
        return 8 * 2 ** k

    def generate(self, k):
        n = self._degree(k)
        if n > 10 ** 5:
            raise ScheduleExceededError(f"degree {n} exceeds the 1e5 cap")
        pts = self.target.sample(n, seed=self.seed + 1_000_003 * k)
        # product of linear factors: dense expansion of random high-degree
        # root sets overflows doubles, the factored form never does
        node = Product([Dense(CoeffPoly([-p, 1.0])) for p in pts])
        exact = RootSet.from_points(list(pts), merge_radius=0.0)
        return FamilyMember(k, n, node, exact, spec=self)

    def root_bound(self):
        return self.target.support_radius + 1.0


class ChebyshevSegment(FamilySpec):
    """Monic Chebyshev polynomials of [-2, 2]: T_n(w + 1/w) = w^n + w^-n."""

    kind = "chebyshev"

    def __init__(self, schedule: Sequence[int] | None = None):
        self.schedule = list(schedule) if schedule is not None else None

    def _degree(self, k):
        if self.schedule is not None:
            if not 0 <= k < len(self.schedule):
                raise ScheduleExceededError(f"index {k} outside schedule")
            return self.schedule[k]
        return 8 * 2 ** k

    def generate(self, k):
        n = self._degree(k)
        if n < 1 or n > 2 ** 14:
            raise ScheduleExceededError(f"degree {n} out of range")
        j = np.arange(1, n + 1)
        pts = 2.0 * np.cos((2 * j - 1) * np.pi / (2 * n)) + 0j
        # factored form: the monomial basis is hopelessly ill-conditioned
        # near [-2,2] (condition ~ (1+sqrt 2)^n), the root form is exact
        if n == 1:
            poly: StructuralPoly = Dense(CoeffPoly([-pts[0], 1.0]))
        else:
            poly = Product([Dense(CoeffPoly([-p, 1.0])) for p in pts])
        roots = RootSet.from_points(list(pts), merge_radius=0.0)
        droots = None
        if n > 1:
            jj = np.arange(1, n)
            droots = RootSet.from_points(list(2.0 * np.cos(jj * np.pi / n)
                                              + 0j), merge_radius=0.0)
        return FamilyMember(k, n, poly, roots, droots, spec=self)

    def root_bound(self):
        return 2.0


class PowersUnity(FamilySpec):
    """q_k = z^{n_k} - 1; the negative control with derivative roots all
    collapsing to the origin."""

    kind = "powers-unity"

    def __init__(self, schedule: Sequence[int] | None = None):
        self.schedule = list(schedule) if schedule is not None else None

    def _degree(self, k):
        if self.schedule is not None:
            if not 0 <= k < len(self.schedule):
                raise ScheduleExceededError(f"index {k} outside schedule")
            return self.schedule[k]
        if k < 1:
            raise ScheduleExceededError("default schedule starts at k = 1")
        return 2 ** k

    def generate(self, k):
        n = self._degree(k)
        if n > 2 ** 20:
            raise ScheduleExceededError(f"degree {n} out of range")
        coeffs = [0j] * (n + 1)
        coeffs[0], coeffs[n] = -1.0, 1.0
        j = np.arange(n)
        roots = RootSet.from_points(list(np.exp(2j * np.pi * j / n)),
                                    merge_radius=0.0)
        droots = RootSet.from_points([0j], [n - 1])
        return FamilyMember(k, n, Dense(CoeffPoly(coeffs)), roots, droots,
                            spec=self)

    def derivative_roots(self, member, m):
        if m >= member.n_k:
            return None
        return RootSet.from_points([0j], [member.n_k - m])

    def root_bound(self):
        return 1.0


class ExplicitList(FamilySpec):
    """A fixed, explicitly provided list of polynomials."""

    kind = "explicit"

    def __init__(self, polys: Sequence[CoeffPoly]):
        ps = [CoeffPoly(p) if isinstance(p, (list, tuple)) else p
              for p in polys]
        if not ps or any(p.is_zero or p.degree < 1 for p in ps):
            raise RootlabError("need nonconstant polynomials")
        self.polys = ps

    def generate(self, k):
        if not 0 <= k < len(self.polys):
            raise ScheduleExceededError(f"index {k} outside the list")
        p = self.polys[k]
        return FamilyMember(k, p.degree, Dense(p), spec=self)

    def root_bound(self):
        return max(1.0 + sum(abs(c / p.leading) for c in p.coeffs[:-1])
                   for p in self.polys)


# ---------------------------------------------------------------------------
# member-level operations


def derivative_member(member: FamilyMember, m: int = 1) -> FamilyMember:
    """The member holding q_k^{(m)}, carrying exact roots when available."""
    if m < 1 or m >= member.n_k:
        raise RootlabError("need 1 <= m < degree")
    exact = None
    if member.spec is not None:
        exact = member.spec.derivative_roots(member, m)
    elif m == 1:
        exact = member.exact_derivative_roots
    return FamilyMember(member.k, member.n_k - m,
                        derivative(member.poly, m), exact, spec=None)


def roots_of(member: FamilyMember, method: str = "auto",
             seed: int = 0) -> RootSet:
    """Root multiset of a member: exact structure, Aberth on the expansion,
    or region-local quadtree isolation, in that order of preference."""
    if method not in ("auto", "exact", "aberth", "quadtree"):
        raise RootlabError(f"unknown method {method!r}")
    if method in ("auto", "exact") and member.exact_roots is not None:
        return member.exact_roots
    if method == "exact":
        raise RootlabError("no exact roots attached to this member")
    if method in ("auto", "aberth"):
        if member.n_k <= 4096:
            return aberth_solve(expand(member.poly), seed=seed)
        if method == "aberth":
            raise DegreeCapExceededError("degree above the 4096 solve cap")
    bound = 1.0 + (member.spec.root_bound() if member.spec is not None
                   else _coeff_bound(member))
    return isolate_and_polish(member.poly, Disk(0j, bound), seed=seed)


def _coeff_bound(member: FamilyMember) -> float:
    p = expand(member.poly)
    return 1.0 + sum(abs(c / p.leading) for c in p.coeffs[:-1])
