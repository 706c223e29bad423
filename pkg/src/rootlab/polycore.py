"""Exact polynomial representations and jet evaluation.

A polynomial is either a dense coefficient vector (:class:`CoeffPoly`) or an
unexpanded DAG (:class:`StructuralPoly`) built from dense leaves by affine
precomposition, products, composition chains and lazy derivatives.  The DAG
form keeps degree-``2**k`` families evaluable: evaluation works on truncated
Taylor series with magnitude-tracked coefficients, so values of degree-4096
products never overflow a double.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (DegreeCapExceededError, AtRootError,
                     EvaluationRangeError, ZeroPolynomialError)
from .scaled import SC, SC_ONE, SC_ZERO, sc_from

__all__ = [
    "CoeffPoly", "StructuralPoly", "Dense", "AffineArg", "Product",
    "Derivative", "Compose", "Jet", "eval_jet", "derivative", "expand",
    "log_abs_normalized",
]


def _check_finite(values) -> None:
    for v in values:
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise EvaluationRangeError("non-finite coefficient")


@dataclass(frozen=True)
class CoeffPoly:
    """Dense polynomial, coefficients ascending by power.

    The zero polynomial is a distinct flagged state (empty coefficient
    tuple); it never masquerades as degree -1.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence[complex]):
        cs = [complex(c) for c in coeffs]
        _check_finite(cs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        return self.coeffs[-1]

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def deriv_coeffs(self, m: int = 1) -> "CoeffPoly":
        if self.is_zero or m > self.degree:
            raise ZeroPolynomialError(f"derivative of order {m} is zero")
        cs = list(self.coeffs)
        for _ in range(m):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return CoeffPoly(cs)

    def monic(self) -> "CoeffPoly":
        g = self.leading
        return CoeffPoly([c / g for c in self.coeffs])


# ---------------------------------------------------------------------------
# structural DAG


class StructuralPoly:
    """Base node.  Immutable after construction; evaluation is pure."""

    degree: int

    def leading_sc(self) -> SC:
        raise NotImplementedError

    def _series(self, z: complex, order: int):
        """Taylor coefficients of p(z + eps) up to eps**order, as SC list."""
        raise NotImplementedError

    def node_name(self) -> str:
        return type(self).__name__


class Dense(StructuralPoly):
    def __init__(self, poly: CoeffPoly):
        if isinstance(poly, (list, tuple)):
            poly = CoeffPoly(poly)
        if poly.is_zero:
            raise ZeroPolynomialError("Dense node cannot hold the zero polynomial")
        self.poly = poly
        self.degree = poly.degree

    def leading_sc(self) -> SC:
        return sc_from(self.poly.leading)

    def _series(self, z, order):
        acc = [SC_ZERO] * (order + 1)
        for c in reversed(self.poly.coeffs):
            # acc <- acc * (z + eps) + c
            nxt = [SC_ZERO] * (order + 1)
            for i in range(order, -1, -1):
                v = acc[i].scale(z)
                if i > 0:
                    v = v + acc[i - 1]
                nxt[i] = v
            nxt[0] = nxt[0] + sc_from(c)
            acc = nxt
        return acc


class AffineArg(StructuralPoly):
    """child(a*z + b) with a != 0."""

    def __init__(self, child: StructuralPoly, a: complex, b: complex):
        if a == 0:
            raise ValueError("AffineArg requires a != 0")
        self.child = child
        self.a = complex(a)
        self.b = complex(b)
        self.degree = child.degree

    def leading_sc(self) -> SC:
        return self.child.leading_sc() * sc_from(self.a).pow_int(self.degree)

    def _series(self, z, order):
        s = self.child._series(self.a * z + self.b, order)
        # inner derivative a: i-th Taylor coefficient picks up a**i
        ai = 1.0 + 0j
        out = []
        for i, t in enumerate(s):
            out.append(t.scale(ai))
            ai *= self.a
        return out


class Product(StructuralPoly):
    def __init__(self, children: Sequence[StructuralPoly]):
        if not children:
            raise ValueError("empty product")
        self.children = tuple(children)
        self.degree = sum(c.degree for c in self.children)

    def leading_sc(self) -> SC:
        out = SC_ONE
        for c in self.children:
            out = out * c.leading_sc()
        return out

    def _series(self, z, order):
        acc = None
        for c in self.children:
            s = c._series(z, order)
            acc = s if acc is None else _series_mul(acc, s, order)
        return acc


class Derivative(StructuralPoly):
    """Lazy m-th derivative of a structural child."""

    def __init__(self, child: StructuralPoly, order: int):
        if order < 1:
            raise ValueError("derivative order must be positive")
        if isinstance(child, Derivative):
            order += child.order
            child = child.child
        if child.degree < order:
            raise ZeroPolynomialError("derivative exhausts the degree")
        self.child = child
        self.order = order
        self.degree = child.degree - order

    def leading_sc(self) -> SC:
        n, m = self.child.degree, self.order
        fac = 1.0
        for i in range(n, n - m, -1):
            fac *= i
        return self.child.leading_sc().scale(fac)

    def _series(self, z, order):
        s = self.child._series(z, order + self.order)
        out = []
        for i in range(order + 1):
            # (i+m)! / i!
            fac = 1.0
            for j in range(i + 1, i + self.order + 1):
                fac *= j
            out.append(s[i + self.order].scale(fac))
        return out


class Compose(StructuralPoly):
    """outer(inner(z)) with dense outer; used for iterate chains."""

    def __init__(self, outer: CoeffPoly, inner: StructuralPoly):
        if outer.is_zero or outer.degree < 1:
            raise ValueError("outer must have degree >= 1")
        self.outer = outer
        self.inner = inner
        self.degree = outer.degree * inner.degree

    def leading_sc(self) -> SC:
        return sc_from(self.outer.leading) * \
            self.inner.leading_sc().pow_int(self.outer.degree)

    def _series(self, z, order):
        s = self.inner._series(z, order)
        acc = [SC_ZERO] * (order + 1)
        for c in reversed(self.outer.coeffs):
            acc = _series_mul(acc, s, order)
            acc[0] = acc[0] + sc_from(c)
        return acc


def _series_mul(a, b, order):
    out = [SC_ZERO] * (order + 1)
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j in range(0, order + 1 - i):
            bj = b[j]
            if bj.is_zero:
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class Jet:
    """(p(z), p'(z), ..., p^(m)(z)) at a point."""

    values: tuple

    @property
    def order(self) -> int:
        return len(self.values) - 1


def as_structural(p) -> StructuralPoly:
    if isinstance(p, StructuralPoly):
        return p
    if isinstance(p, CoeffPoly):
        return Dense(p)
    return Dense(CoeffPoly(p))


def eval_series_scaled(p, z: complex, m: int):
    """Taylor coefficients of p at z as SC values, orders 0..m."""
    return as_structural(p)._series(complex(z), m)


def eval_jet(p, z: complex, m: int = 0) -> Jet:
    """Evaluate p and its derivatives up to order m at z."""
    node = as_structural(p)
    s = node._series(z, m)
    vals = []
    fac = 1.0
    for i, t in enumerate(s):
        if i > 0:
            fac *= i
        try:
            vals.append(t.scale(fac).to_complex())
        except EvaluationRangeError as exc:
            raise EvaluationRangeError(
                f"overflow evaluating order-{i} value", node.node_name()) from exc
    return Jet(tuple(vals))


def derivative(p, m: int = 1) -> StructuralPoly:
    """m-th derivative; dense leaves differentiate coefficient-wise."""
    if m < 1:
        raise ValueError("m must be positive")
    node = as_structural(p)
    if node.degree < m:
        raise ZeroPolynomialError("m exceeds the degree")
    if isinstance(node, Dense):
        return Dense(node.poly.deriv_coeffs(m))
    return Derivative(node, m)


def expand(p, degree_cap: int = 4096) -> CoeffPoly:
    """Exact coefficient expansion of a structural polynomial."""
    node = as_structural(p)
    if node.degree > degree_cap:
        raise DegreeCapExceededError(
            f"degree {node.degree} exceeds cap {degree_cap}")
    arr = _expand_array(node)
    _check_finite(arr)
    return CoeffPoly(arr)


def _expand_array(node) -> np.ndarray:
    if isinstance(node, Dense):
        return np.array(node.poly.coeffs, dtype=complex)
    if isinstance(node, AffineArg):
        child = _expand_array(node.child)
        return _substitute_affine(child, node.a, node.b)
    if isinstance(node, Product):
        out = np.array([1.0 + 0j])
        for c in node.children:
            out = np.convolve(out, _expand_array(c))
        return out
    if isinstance(node, Derivative):
        arr = _expand_array(node.child)
        for _ in range(node.order):
            arr = arr[1:] * np.arange(1, len(arr))
        return arr
    if isinstance(node, Compose):
        inner = _expand_array(node.inner)
        acc = np.array([0j])
        for c in reversed(node.outer.coeffs):
            acc = np.convolve(acc, inner)
            acc[0] += c
        return acc
    raise TypeError(f"unknown node {node!r}")


def _substitute_affine(coeffs: np.ndarray, a: complex, b: complex) -> np.ndarray:
    # Horner in the polynomial ring: p(a z + b)
    lin = np.array([b, a], dtype=complex)
    acc = np.array([0j])
    for c in coeffs[::-1]:
        acc = np.convolve(acc, lin)
        acc[0] += c
    return acc


def log_abs_normalized(p, z: complex) -> float:
    """(1/deg) * log| p(z) / leading(p) |, safe at degree >= 1000."""
    node = as_structural(p)
    n = node.degree
    if n < 1:
        raise ZeroPolynomialError("degree must be >= 1")
    v = node._series(z, 0)[0]
    if v.is_zero:
        raise AtRootError(f"p({z}) underflowed to zero")
    return (v.log_abs() - node.leading_sc().log_abs()) / n


def log_deriv_ratio(p, z: complex) -> complex:
    """p'(z) / (deg * p(z)), computed in scaled arithmetic."""
    node = as_structural(p)
    s = node._series(z, 1)
    if s[0].is_zero:
        raise AtRootError(f"p({z}) underflowed to zero")
    return (s[1] / s[0]).to_complex() / node.degree
