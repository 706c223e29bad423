"""Planar probe regions: disks, boxes, annuli, unions and their dilations.

Regions house the sets A, A_eps and L used by the counting checks.
Membership is closed-set membership; ``dilate(eps)`` returns the open
eps-neighborhood {z : d(z, A) < eps} represented with exact distance
functions for the primitive shapes.
"""
from __future__ import annotations

import cmath
import math
from typing import Callable, List, Sequence

__all__ = ["Region", "Disk", "Box", "Annulus", "Union", "CappedComplement",
           "Dilation"]


class Region:
    """Base class; all shapes are immutable."""

    def contains(self, z: complex) -> bool:
        raise NotImplementedError

    def distance(self, z: complex) -> float:
        """Euclidean distance from z to the region (0 inside)."""
        raise NotImplementedError

    def dilate(self, eps: float) -> "Region":
        if eps <= 0:
            raise ValueError("eps must be positive")
        return Dilation(self, eps)

    def boundary_loops(self) -> List[Callable[[float], complex]]:
        """Closed loops t in [0,1] -> C; outer ccw, holes cw."""
        raise NotImplementedError(
            f"{type(self).__name__} has no boundary parameterization")

    def jitter(self, delta: float) -> "Region":
        """Slightly rescaled copy, used to push zeros off the boundary."""
        raise NotImplementedError

    def bounding_box(self) -> "Box":
        raise NotImplementedError

    def probe_points(self, n: int = 48) -> List[complex]:
        """Coarse boundary + interior sample for support-clearance checks."""
        pts = []
        for loop in self.boundary_loops():
            pts.extend(loop(i / n) for i in range(n))
        return pts


def _circle(c: complex, r: float, ccw: bool) -> Callable[[float], complex]:
    sgn = 1.0 if ccw else -1.0

    def loop(t: float) -> complex:
        return c + r * cmath.exp(2j * math.pi * sgn * t)

    return loop


class Disk(Region):
    def __init__(self, center: complex, r: float):
        if r <= 0:
            raise ValueError("radius must be positive")
        self.center = complex(center)
        self.r = float(r)

    def contains(self, z):
        return abs(z - self.center) <= self.r

    def distance(self, z):
        return max(0.0, abs(z - self.center) - self.r)

    def dilate(self, eps):
        return Disk(self.center, self.r + eps)

    def boundary_loops(self):
        return [_circle(self.center, self.r, True)]

    def jitter(self, delta):
        return Disk(self.center, self.r * (1.0 + delta))

    def bounding_box(self):
        c, r = self.center, self.r
        return Box(complex(c.real - r, c.imag - r), complex(c.real + r, c.imag + r))

    def __repr__(self):
        return f"Disk({self.center}, {self.r})"


class Box(Region):
    def __init__(self, corner_lo: complex, corner_hi: complex):
        self.x0 = min(corner_lo.real, corner_hi.real)
        self.x1 = max(corner_lo.real, corner_hi.real)
        self.y0 = min(corner_lo.imag, corner_hi.imag)
        self.y1 = max(corner_lo.imag, corner_hi.imag)
        if self.x0 == self.x1 or self.y0 == self.y1:
            raise ValueError("degenerate box")

    def contains(self, z):
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1

    def distance(self, z):
        dx = max(self.x0 - z.real, 0.0, z.real - self.x1)
        dy = max(self.y0 - z.imag, 0.0, z.imag - self.y1)
        return math.hypot(dx, dy)

    def boundary_loops(self):
        c00 = complex(self.x0, self.y0)
        c10 = complex(self.x1, self.y0)
        c11 = complex(self.x1, self.y1)
        c01 = complex(self.x0, self.y1)
        corners = [c00, c10, c11, c01, c00]

        def loop(t: float) -> complex:
            s = (t % 1.0) * 4.0
            i = min(int(s), 3)
            f = s - i
            return corners[i] * (1 - f) + corners[i + 1] * f

        return [loop]

    def jitter(self, delta):
        cx = (self.x0 + self.x1) / 2
        cy = (self.y0 + self.y1) / 2
        g = 1.0 + delta
        return Box(complex(cx + (self.x0 - cx) * g, cy + (self.y0 - cy) * g),
                   complex(cx + (self.x1 - cx) * g, cy + (self.y1 - cy) * g))

    def bounding_box(self):
        return self

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0

    def quarters(self, xm: float | None = None, ym: float | None = None):
        if xm is None:
            xm = (self.x0 + self.x1) / 2
        if ym is None:
            ym = (self.y0 + self.y1) / 2
        return [Box(complex(self.x0, self.y0), complex(xm, ym)),
                Box(complex(xm, self.y0), complex(self.x1, ym)),
                Box(complex(self.x0, ym), complex(xm, self.y1)),
                Box(complex(xm, ym), complex(self.x1, self.y1))]

    def __repr__(self):
        return f"Box(({self.x0},{self.y0}), ({self.x1},{self.y1}))"


class Annulus(Region):
    def __init__(self, center: complex, r_in: float, r_out: float):
        if not 0 <= r_in < r_out:
            raise ValueError("need 0 <= r_in < r_out")
        self.center = complex(center)
        self.r_in = float(r_in)
        self.r_out = float(r_out)

    def contains(self, z):
        return self.r_in <= abs(z - self.center) <= self.r_out

    def distance(self, z):
        d = abs(z - self.center)
        if d < self.r_in:
            return self.r_in - d
        return max(0.0, d - self.r_out)

    def dilate(self, eps):
        return Annulus(self.center, max(0.0, self.r_in - eps), self.r_out + eps)

    def boundary_loops(self):
        loops = [_circle(self.center, self.r_out, True)]
        if self.r_in > 0:
            loops.append(_circle(self.center, self.r_in, False))
        return loops

    def jitter(self, delta):
        return Annulus(self.center, self.r_in * (1.0 - delta),
                       self.r_out * (1.0 + delta))

    def bounding_box(self):
        c, r = self.center, self.r_out
        return Box(complex(c.real - r, c.imag - r), complex(c.real + r, c.imag + r))

    def __repr__(self):
        return f"Annulus({self.center}, {self.r_in}, {self.r_out})"


class Union(Region):
    """Union of disjoint members (counting loops assume disjointness)."""

    def __init__(self, members: Sequence[Region]):
        if not members:
            raise ValueError("empty union")
        self.members = tuple(members)

    def contains(self, z):
        return any(m.contains(z) for m in self.members)

    def distance(self, z):
        return min(m.distance(z) for m in self.members)

    def dilate(self, eps):
        return Union([m.dilate(eps) for m in self.members])

    def boundary_loops(self):
        loops = []
        for m in self.members:
            loops.extend(m.boundary_loops())
        return loops

    def jitter(self, delta):
        return Union([m.jitter(delta) for m in self.members])

    def bounding_box(self):
        boxes = [m.bounding_box() for m in self.members]
        return Box(complex(min(b.x0 for b in boxes), min(b.y0 for b in boxes)),
                   complex(max(b.x1 for b in boxes), max(b.y1 for b in boxes)))

    def __repr__(self):
        return f"Union({list(self.members)!r})"


class CappedComplement(Region):
    """{ z : |z - center| >= r } intersected with the cap disk D(0, r_cap)."""

    def __init__(self, center: complex, r: float, r_cap: float):
        if r <= 0 or r_cap <= 0:
            raise ValueError("radii must be positive")
        self.center = complex(center)
        self.r = float(r)
        self.r_cap = float(r_cap)

    def contains(self, z):
        return abs(z - self.center) >= self.r and abs(z) <= self.r_cap

    def distance(self, z):
        # lower bound via independent projections; exact away from corners
        return max(0.0, self.r - abs(z - self.center), abs(z) - self.r_cap)

    def dilate(self, eps):
        return CappedComplement(self.center, max(self.r - eps, 1e-300),
                                self.r_cap + eps)

    def boundary_loops(self):
        return [_circle(0j, self.r_cap, True), _circle(self.center, self.r, False)]

    def jitter(self, delta):
        return CappedComplement(self.center, self.r * (1.0 - delta),
                                self.r_cap * (1.0 + delta))

    def bounding_box(self):
        r = self.r_cap
        return Box(complex(-r, -r), complex(r, r))

    def __repr__(self):
        return f"CappedComplement({self.center}, {self.r}, cap={self.r_cap})"


class Dilation(Region):
    """Open eps-neighborhood of a base region, via its distance function."""

    def __init__(self, base: Region, eps: float):
        self.base = base
        self.eps = float(eps)

    def contains(self, z):
        return self.base.distance(z) <= self.eps

    def distance(self, z):
        return max(0.0, self.base.distance(z) - self.eps)

    def dilate(self, eps):
        return Dilation(self.base, self.eps + eps)

    def jitter(self, delta):
        return Dilation(self.base.jitter(delta), self.eps * (1.0 + delta))

    def bounding_box(self):
        b = self.base.bounding_box()
        e = self.eps
        return Box(complex(b.x0 - e, b.y0 - e), complex(b.x1 + e, b.y1 + e))

    def __repr__(self):
        return f"Dilation({self.base!r}, {self.eps})"
