"""Root finding and counting: Aberth-Ehrlich iteration, argument-principle
winding counts, quadtree isolation, and structured enumeration of backward
orbits for iterate families."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .errors import (BoundaryZeroError, EvaluationRangeError,
                     ExceptionalPointError, NoConvergenceError, RootlabError,
                     SubdivisionLimitError)
from .polycore import (CoeffPoly, as_structural, eval_jet, eval_series_scaled)
from .regions import Box, Region

__all__ = ["RootSet", "aberth_solve", "winding_count", "winding_of_function",
           "direction_from_roots",
           "isolate_and_polish", "isolate_zeros_of_function",
           "backward_orbit", "iterate_derivative_roots"]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities in canonical (re, im) order."""

    roots: tuple  # of (complex point, int multiplicity)

    @staticmethod
    def from_points(points: Sequence[complex],
                    multiplicities: Sequence[int] | None = None,
                    merge_radius: float = 1e-10) -> "RootSet":
        if multiplicities is None:
            multiplicities = [1] * len(points)
        merged = _merge_clusters(list(points), list(multiplicities), merge_radius)
        merged.sort(key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))
        return RootSet(tuple(merged))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.roots)

    def points(self) -> np.ndarray:
        return np.array([p for p, _ in self.roots], dtype=complex)

    def expanded_points(self) -> np.ndarray:
        """Each root repeated by its multiplicity."""
        out = []
        for p, m in self.roots:
            out.extend([p] * m)
        return np.array(out, dtype=complex)

    def count_in(self, region: Region) -> int:
        return sum(m for p, m in self.roots if region.contains(p))

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("re,im,multiplicity\n")
            for p, m in self.roots:
                fh.write(f"{p.real:.12g},{p.imag:.12g},{m}\n")


def _merge_clusters(points, mults, radius):
    """Single-linkage merge of points within `radius`; weights add."""
    n = len(points)
    if n == 0:
        return []
    order = sorted(range(n), key=lambda i: (points[i].real, points[i].imag))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(n):
        i = order[a]
        for b in range(a + 1, n):
            j = order[b]
            if points[j].real - points[i].real > radius:
                break
            if abs(points[i] - points[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idx in groups.values():
        w = sum(mults[i] for i in idx)
        c = sum(points[i] * mults[i] for i in idx) / w
        out.append((c, w))
    return out


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous iteration


def _horner_with_error(coeffs: np.ndarray, z: np.ndarray):
    """Vectorized Horner returning (p(z), running error bound)."""
    b = np.full_like(z, coeffs[-1])
    err = np.abs(b)
    az = np.abs(z)
    for c in coeffs[-2::-1]:
        b = b * z + c
        err = err * az + np.abs(b)
    return b, err * _EPS * 4.0


def aberth_solve(p: CoeffPoly, tol: float = 1e-12, max_iter: int = 500,
                 seed: int = 0) -> RootSet:
    """Simultaneous root finding from perturbed-circle initial guesses.

    Multiplicities come from clustering converged iterates, not deflation.
    """
    if p.is_zero or p.degree < 1:
        raise RootlabError("need degree >= 1")
    coeffs = np.array(p.coeffs, dtype=complex) / p.leading
    # strip exact roots at the origin
    n_zero = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        n_zero += 1
    n = len(coeffs) - 1
    if n == 0:
        return RootSet.from_points([0j] * n_zero) if n_zero else RootSet(())

    rng = np.random.default_rng(seed ^ 0x5EED)
    r0 = abs(coeffs[0]) ** (1.0 / n)
    r0 = min(max(r0, 1e-12), 1e12)
    ang = 2 * np.pi * (np.arange(n) + 0.5) / n + 0.37 + 0.05 * rng.random(n)
    z = r0 * np.exp(1j * ang)

    active = np.ones(n, dtype=bool)
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    for _ in range(max_iter):
        pv, perr = _horner_with_error(coeffs, z)
        dv, _ = _horner_with_error(dcoeffs, z)
        done_res = np.abs(pv) <= perr  # no digits left in the residual
        dv = np.where(dv == 0, _EPS, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-30, 1e-30, denom)
        corr = w / denom
        conv = np.abs(corr) <= tol * (1.0 + np.abs(z))
        step = active & ~done_res
        z = np.where(step, z - corr, z)
        active = active & ~(conv | done_res)
        if not active.any():
            break
    else:
        pv, perr = _horner_with_error(coeffs, z)
        if np.any(np.abs(pv) > np.maximum(perr * 64, tol * (1 + np.abs(z)) ** n)):
            best = RootSet.from_points(list(z))
            raise NoConvergenceError(f"Aberth stalled after {max_iter} iterations",
                                     best=best)

    # multiplicity via clustering; 10*tol alone cannot resolve the
    # ~sqrt(eps) accuracy limit of multiple roots in doubles
    merge_r = max(10.0 * tol, 2e-7 * (1.0 + float(np.max(np.abs(z)))))
    pts = list(z)
    mults = [1] * n
    if n_zero:
        pts.append(0j)
        mults.append(n_zero)
    return RootSet.from_points(pts, mults, merge_radius=merge_r)


# ---------------------------------------------------------------------------
# argument-principle winding counts


class _BoundaryZero(Exception):
    pass


def _log_phase(v):
    """Normalize a direction sample to (log|v|, arg v, |v'/v| or None).

    Accepts a complex, a magnitude-tracked value, a (log, phase) pair, or a
    (log, phase, logderiv_abs) triple when the caller can supply the exact
    logarithmic derivative for step control."""
    if isinstance(v, complex):
        if v == 0:
            raise _BoundaryZero
        return math.log(abs(v)), cmath.phase(v), None
    if isinstance(v, tuple):
        if not math.isfinite(v[0]):
            raise _BoundaryZero
        if len(v) == 2:
            return v[0], v[1], None
        return v
    if v.is_zero:
        raise _BoundaryZero
    return v.log_abs(), v.phase(), None


def _loop_arg_change(direction: Callable[[complex], complex],
                     loop: Callable[[float], complex],
                     n0: int = 64, max_splits: int = 1 << 18) -> float:
    """Total argument change of `direction` along a closed loop.

    A step from z0 to z1 is accepted only when the wrapped argument
    increment stays below pi/2, the log-magnitude increment is small, and
    -- when the sampler reports |f'/f| -- the step resolves the local
    Lipschitz scale of log f: |z1-z0| * max(|f'/f|) < 1/2.  The last test
    is what makes counting reliable near dense root clusters, where
    endpoint phases alone alias full turns."""
    ts = [i / n0 for i in range(n0)] + [1.0]
    zs = [loop(t) for t in ts]
    vals = [_log_phase(direction(z)) for z in zs]
    total = 0.0
    splits = 0
    stack = [(ts[i], zs[i], vals[i], ts[i + 1], zs[i + 1], vals[i + 1])
             for i in range(len(ts) - 1)]
    while stack:
        t0, z0, (l0, p0, g0), t1, z1, (l1, p1, g1) = stack.pop()
        d = (p1 - p0 + math.pi) % (2 * math.pi) - math.pi
        ok = abs(d) < math.pi / 2 and abs(l1 - l0) < 0.7
        if ok and (g0 is not None or g1 is not None):
            g = max(g0 or 0.0, g1 or 0.0)
            ok = abs(z1 - z0) * g < 0.5
        if ok:
            total += d
            continue
        splits += 1
        if splits > max_splits or (t1 - t0) < 1e-13:
            raise _BoundaryZero  # unresolvable: zero (numerically) on contour
        tm = 0.5 * (t0 + t1)
        zm = loop(tm)
        vm = _log_phase(direction(zm))
        stack.append((t0, z0, (l0, p0, g0), tm, zm, vm))
        stack.append((tm, zm, vm, t1, z1, (l1, p1, g1)))
    return total


def winding_of_function(direction: Callable[[complex], complex],
                        region: Region, seed: int = 0) -> int:
    """Zeros (with multiplicity) of a holomorphic function inside a region.

    `direction` may return the value at any overall positive scale; only its
    phase is used.  Retries with escalating relative boundary jitter when a
    zero sits on the contour; the escalation has to clear the cancellation
    noise floor of a multiple root evaluated in doubles (~sqrt(eps))."""
    rng = np.random.default_rng(seed ^ 0x417D)
    reg = region
    last_exc = None
    for attempt in range(6):
        try:
            total = 0.0
            for loop in reg.boundary_loops():
                total += _loop_arg_change(direction, loop)
            turns = total / (2 * math.pi)
            k = round(turns)
            if abs(turns - k) >= 0.25:
                raise _BoundaryZero
            return int(k)
        except _BoundaryZero as exc:
            last_exc = exc
            delta = 1e-9 * 10.0 ** attempt * (1 + rng.random())
            reg = region.jitter(delta)
        except EvaluationRangeError as exc:
            raise RootlabError(f"non-finite evaluation on contour: {exc}")
    raise BoundaryZeroError(
        "zero persists on the contour after 5 jitter retries") from last_exc


def _poly_direction(p) -> Callable[[complex], complex]:
    node = as_structural(p)

    def direction(z: complex):
        s = node._series(z, 1)
        v = s[0]
        if v.is_zero:
            raise _BoundaryZero
        ratio = s[1] / v if not s[1].is_zero else None
        g = math.exp(min(ratio.log_abs(), 700.0)) if ratio is not None else 0.0
        return v.log_abs(), v.phase(), g

    return direction


def winding_count(p, region: Region, seed: int = 0) -> int:
    """Number of zeros of a polynomial in a region, by boundary walking."""
    return winding_of_function(_poly_direction(p), region, seed=seed)


def direction_from_roots(points: Sequence[complex], m: int = 0,
                         multiplicities: Sequence[int] | None = None
                         ) -> Callable[[complex], tuple]:
    """Winding direction for the m-th derivative of prod (z - r_j).

    Writing u_j = 1/(z - r_j), the derivative is q^(m) = m! e_m(u) q, and
    its logarithmic derivative is (m+1) e_{m+1}(u) / e_m(u); the elementary
    symmetric values come from power sums via Newton's identities.  Far
    cheaper than structural evaluation when the roots are known."""
    if multiplicities is None:
        r = np.asarray(points, dtype=complex)
    else:
        r = np.repeat(np.asarray(points, dtype=complex),
                      np.asarray(multiplicities, dtype=int))
    if m < 0 or m >= len(r):
        raise ValueError("need 0 <= m < number of roots")

    def direction(z: complex):
        u = 1.0 / (z - r)
        p = [None]  # power sums, 1-indexed
        uk = np.ones_like(u)
        for _ in range(m + 1):
            uk = uk * u
            p.append(uk.sum())
        e = [1.0 + 0j]
        for k in range(1, m + 2):
            s = 0j
            for i in range(1, k + 1):
                s += (-1) ** (i - 1) * e[k - i] * p[i]
            e.append(s / k)
        if e[m] == 0:
            return -math.inf, 0.0, 0.0
        la = float(np.log(np.abs(z - r)).sum()) + math.log(abs(e[m]))
        ph = float(np.angle(z - r).sum()) + cmath.phase(e[m])
        g = abs((m + 1) * e[m + 1] / e[m])
        return la, ph, g

    return direction


# ---------------------------------------------------------------------------
# quadtree isolation


def isolate_zeros_of_function(direction, region: Region, radius: float,
                              newton_fn=None, seed: int = 0,
                              max_depth: int = 60) -> RootSet:
    """Quadtree subdivision guided by winding counts.

    `newton_fn(z0) -> complex or None` may polish simple zeros."""
    total = winding_of_function(direction, region, seed=seed)
    if total == 0:
        return RootSet(())
    leaves: List[Tuple[complex, int]] = []

    def recurse(box: Box, count: int, depth: int):
        if count == 0:
            return
        c = complex((box.x0 + box.x1) / 2, (box.y0 + box.y1) / 2)
        # a zero of multiplicity m cannot be resolved below the cancellation
        # floor eps^(1/m); accept the box as a cluster leaf at that scale
        floor = 4 * (1 + abs(c)) * 2.2e-16 ** (1 / max(count, 1))
        if max(box.width, box.height) <= max(radius, floor if count > 1 else 0):
            leaves.append((c, count))
            return
        if depth >= max_depth:
            raise SubdivisionLimitError(f"depth {max_depth} reached near {box}")
        counts = None
        quarters = box.quarters()
        for retry in range(6):
            try:
                counts = [winding_of_function(direction, q,
                                              seed=seed + depth + retry)
                          for q in quarters]
            except BoundaryZeroError:
                counts = None
            if counts is not None and sum(counts) == count:
                break
            # a zero straddles a cut line; shift the subdivision point
            f = (retry + 1) * 7.3e-3
            quarters = box.quarters(
                xm=(box.x0 + box.x1) / 2 + f * box.width,
                ym=(box.y0 + box.y1) / 2 + f * box.height)
        else:
            if count > 1:
                # unresolvable cluster straddling every cut we tried
                leaves.append((c, count))
                return
            raise RootlabError(f"quarter counts never summed to {count} in {box}")
        for q, c2 in zip(quarters, counts):
            recurse(q, c2, depth + 1)

    bbox = region.bounding_box()
    recurse(bbox, winding_of_function(direction, bbox, seed=seed + 1), 0)

    pts, mults = [], []
    for c, m in leaves:
        if m == 1 and newton_fn is not None:
            polished = newton_fn(c)
            if polished is not None and abs(polished - c) <= 4 * radius:
                c = polished
        pts.append(c)
        mults.append(m)
    rs = RootSet.from_points(pts, mults, merge_radius=radius / 2)
    inside = [(p, m) for p, m in rs.roots if region.contains(p)]
    near = sorted(((p, m) for p, m in rs.roots
                   if not region.contains(p) and region.distance(p) <= 4 * radius),
                  key=lambda pm: region.distance(pm[0]))
    got = sum(m for _, m in inside)
    for p, m in near:
        if got >= total:
            break
        inside.append((p, m))
        got += m
    rs = RootSet.from_points([p for p, _ in inside], [m for _, m in inside],
                             merge_radius=radius / 2)
    if rs.total != total:
        raise RootlabError(
            f"isolated {rs.total} zeros but contour count is {total}")
    return rs


def _newton_on_jet(p) -> Callable[[complex], complex | None]:
    node = as_structural(p)

    def polish(z0: complex):
        z = z0
        for _ in range(60):
            s = node._series(z, 1)
            if s[0].is_zero:
                return z
            if s[1].is_zero:
                return None
            step = (s[0] / s[1]).to_complex()
            z -= step
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                return z
        return z

    return polish


def isolate_and_polish(p, region: Region, radius: float = 1e-8,
                       seed: int = 0) -> RootSet:
    """Isolate zeros of a structural polynomial inside a region."""
    return isolate_zeros_of_function(_poly_direction(p), region, radius,
                                     newton_fn=_newton_on_jet(p), seed=seed)


# ---------------------------------------------------------------------------
# structured root sets for iterate families


def _solve_preimages(q: CoeffPoly, target: complex, seed: int = 0) -> RootSet:
    """Roots of q(w) = target."""
    shifted = list(q.coeffs)
    shifted[0] -= target
    d = q.degree
    if d == 2:
        c, b, a = shifted
        disc = cmath.sqrt(b * b - 4 * a * c)
        if (b.conjugate() * disc).real < 0:
            disc = -disc
        r1 = (-b - disc) / (2 * a)
        r2 = c / (a * r1) if r1 != 0 else -b / a - r1
        return RootSet.from_points([r1, r2])
    return aberth_solve(CoeffPoly(shifted), seed=seed)


def _is_monomial(q: CoeffPoly) -> bool:
    return all(c == 0 for c in q.coeffs[:-1])


def forward_iterate(q: CoeffPoly, z: complex, k: int) -> complex:
    for _ in range(k):
        z = q(z)
    return z


def backward_orbit(q: CoeffPoly, a: complex, k: int, seed: int = 0,
                   verify_tol: float = 1e-8,
                   allow_exceptional: bool = False) -> RootSet:
    """All d**k preimages of a under q^k, with multiplicity.

    Rejects the obvious exceptional case a = 0 for q = gamma * z**d unless
    the caller enumerates structured root sets rather than sampling."""
    d = q.degree
    if d < 2:
        raise RootlabError("backward orbits need degree >= 2")
    if _is_monomial(q) and a == 0 and not allow_exceptional:
        raise ExceptionalPointError("0 is exceptional for gamma*z^d")
    if k < 0:
        raise ValueError("k must be >= 0")
    level = [(complex(a), 1)]
    for j in range(k):
        nxt: List[Tuple[complex, int]] = []
        for t, mult in level:
            rs = _solve_preimages(q, t, seed=seed + j)
            for w, m in rs.roots:
                nxt.append((w, m * mult))
        level = nxt
    pts = [p for p, _ in level]
    mults = [m for _, m in level]
    rs = RootSet.from_points(pts, mults)
    scale = 1.0 + abs(a)
    for w, _ in rs.roots:
        resid = abs(forward_iterate(q, w, k) - a)
        if resid > verify_tol * scale:
            raise NoConvergenceError(
                f"preimage {w} returns to {a} with residual {resid:.3g}",
                best=rs)
    if rs.total != d ** k:
        raise RootlabError(f"backward orbit cardinality {rs.total} != {d**k}")
    return rs


def iterate_derivative_roots(q: CoeffPoly, k: int, seed: int = 0) -> RootSet:
    """Roots of (q^k)' via the chain rule: preimages of critical points."""
    d = q.degree
    if d < 2:
        raise RootlabError("need degree >= 2")
    crit = aberth_solve(q.deriv_coeffs(1), seed=seed)
    pts: List[complex] = []
    mults: List[int] = []
    for c, mc in crit.roots:
        for j in range(k):
            orb = backward_orbit(q, c, j, seed=seed + 17 * j,
                                  allow_exceptional=True)
            for w, mw in orb.roots:
                pts.append(w)
                mults.append(mc * mw)
    rs = RootSet.from_points(pts, mults)
    expected = d ** k - 1
    if rs.total != expected:
        raise RootlabError(
            f"chain-rule root total {rs.total} != {expected}")
    return rs
