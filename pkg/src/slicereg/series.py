"""Truncated quaternion power series and their *-algebra.

A series sum_m q^m a_m (left powers, right coefficients) is stored as an
(N+1, 4) float array together with a tail certificate (C, g) asserting
|a_m| <= C * g**m for every m, including the truncated tail.  Certificates
for derived series are fitted from the computed coefficients with a safety
margin; constructors with known geometry (constants, Moebius factors) carry
exact ones.
"""

from __future__ import annotations

import math

import numpy as np

from . import qarray
from .errors import (
    InconsistentDivision,
    NotInvertibleAtZero,
    OutsideConvergence,
    RealPoint,
    SymmetrizationNotReal,
)
from .quaternion import Quaternion

__all__ = [
    "TaylorSeries",
    "star_mul",
    "conjugate",
    "symmetrize",
    "star_inverse",
    "evaluate",
    "evaluate_many",
    "cullen_derivative",
    "spherical_derivative",
    "left_linear_divide",
    "series_add",
    "series_sub",
    "left_const_mul",
    "right_const_mul",
    "shift_up",
]

DEFAULT_ORDER = 64
_SAFETY_C = 4.0
_SAFETY_G = 1.01
_CERT_SLACK = 1e-9


def _fit_certificate(coeffs: np.ndarray):
    norms = np.linalg.norm(coeffs, axis=1)
    cmax = float(norms.max(initial=0.0))
    if cmax == 0.0:
        return 0.0, 0.0
    ms = np.nonzero(norms > cmax * 1e-250)[0]
    ms = ms[ms >= 1]
    if len(ms) == 0:
        return cmax * _SAFETY_C, 0.0
    g = max((norms[m] / cmax) ** (1.0 / m) for m in ms)
    return cmax * _SAFETY_C, g * _SAFETY_G


class TaylorSeries:
    """Immutable truncated power series with quaternion coefficients."""

    __slots__ = ("coeffs", "coeff_bound", "growth_rate", "exact")

    def __init__(self, coeffs, coeff_bound=None, growth_rate=None, exact=False):
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if coeffs.shape[-1] != 4 or coeffs.ndim != 2 or coeffs.shape[0] < 1:
            raise ValueError("coeffs must be an (N+1, 4) array, N >= 0")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("series coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        if coeff_bound is None or growth_rate is None:
            coeff_bound, growth_rate = _fit_certificate(coeffs)
        if coeff_bound < 0 or growth_rate < 0:
            raise ValueError("certificate constants must be nonnegative")
        norms = np.linalg.norm(coeffs, axis=1)
        caps = coeff_bound * growth_rate ** np.arange(len(norms))
        if np.any(norms > caps + _CERT_SLACK * max(1.0, norms.max(initial=0.0))):
            raise ValueError("stored coefficients violate the tail certificate")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "coeff_bound", float(coeff_bound))
        object.__setattr__(self, "growth_rate", float(growth_rate))
        # exact means the function IS this polynomial: zero truncation tail
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("TaylorSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_quaternions(cls, qs, coeff_bound=None, growth_rate=None, exact=False):
        arr = np.array([q.components() for q in qs], dtype=float)
        return cls(arr, coeff_bound, growth_rate, exact)

    @classmethod
    def constant(cls, c: Quaternion):
        return cls(np.array([c.components()]), abs(c), 0.0, exact=True)

    @classmethod
    def identity(cls, order=1):
        arr = np.zeros((max(order, 1) + 1, 4))
        arr[1, 0] = 1.0
        return cls(arr, 2.0, 0.5, exact=True)

    @classmethod
    def linear(cls, a0: Quaternion, a1: Quaternion):
        """The affine series a0 + q * a1."""
        return cls(np.array([a0.components(), a1.components()]), exact=True)

    # -- views --------------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    def coefficient(self, m: int) -> Quaternion:
        return qarray.to_quaternion(self.coeffs[m])

    def coefficient_norms(self) -> np.ndarray:
        return np.linalg.norm(self.coeffs, axis=1)

    def tail_bound(self, radius: float) -> float:
        """Bound on |sum_{m>N} q^m a_m| for |q| <= radius."""
        if self.exact:
            return 0.0
        t = self.growth_rate * radius
        if t >= 1.0:
            return math.inf
        return self.coeff_bound * t ** (self.order + 1) / (1.0 - t)

    def is_real(self, tol=1e-12) -> bool:
        scale = max(1.0, float(np.abs(self.coeffs).max()))
        return float(np.abs(self.coeffs[:, 1:]).max(initial=0.0)) <= tol * scale

    def to_json(self):
        return {
            "coeffs": self.coeffs.tolist(),
            "coeffBound": self.coeff_bound,
            "growthRate": self.growth_rate,
            "exact": self.exact,
        }

    @classmethod
    def from_json(cls, d):
        return cls(np.asarray(d["coeffs"], dtype=float),
                   d.get("coeffBound"), d.get("growthRate"),
                   d.get("exact", False))

    def __repr__(self):
        return (f"TaylorSeries(order={self.order}, C={self.coeff_bound:.3g}, "
                f"g={self.growth_rate:.3g})")


# -- coefficient-level helpers ----------------------------------------


def _qconv(a: np.ndarray, b: np.ndarray, n_out: int) -> np.ndarray:
    """First n_out+1 coefficients of the quaternion Cauchy convolution."""
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]

    def cv(u, v):
        return np.convolve(u, v)[: n_out + 1]

    return np.stack(
        [
            cv(aw, bw) - cv(ax, bx) - cv(ay, by) - cv(az, bz),
            cv(aw, bx) + cv(ax, bw) + cv(ay, bz) - cv(az, by),
            cv(aw, by) - cv(ax, bz) + cv(ay, bw) + cv(az, bx),
            cv(aw, bz) + cv(ax, by) - cv(ay, bx) + cv(az, bw),
        ],
        axis=-1,
    )


def _pad(arr: np.ndarray, n: int) -> np.ndarray:
    if arr.shape[0] >= n + 1:
        return arr[: n + 1]
    out = np.zeros((n + 1, 4))
    out[: arr.shape[0]] = arr
    return out


# -- operations -------------------------------------------------------


def star_mul(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """*-product: Cauchy convolution of coefficients.

    The result is truncated at the smallest order up to which both factors
    are accurate; an exact (polynomial) factor never limits the order.
    """
    if f.exact and g.exact:
        n = f.order + g.order
    elif f.exact:
        n = g.order
    elif g.exact:
        n = f.order
    else:
        n = min(f.order, g.order)
    coeffs = _qconv(f.coeffs, g.coeffs, n)
    if f.exact and g.exact:
        return TaylorSeries(coeffs, exact=True)
    cb, gr = _fit_certificate(coeffs)
    # keep at least the analytic growth of the factors so truncated tails
    # of slowly-decaying products are not underestimated
    gr = max(gr, f.growth_rate, g.growth_rate)
    return TaylorSeries(coeffs, max(cb, f.coeff_bound * g.coeff_bound), gr)


def conjugate(f: TaylorSeries) -> TaylorSeries:
    """Regular conjugate: conjugate every coefficient."""
    coeffs = f.coeffs.copy()
    coeffs[:, 1:] = -coeffs[:, 1:]
    return TaylorSeries(coeffs, f.coeff_bound, f.growth_rate, f.exact)


def symmetrize(f: TaylorSeries, tol=1e-12) -> TaylorSeries:
    """f^s = f * f^c; coefficients are checked real and hard-set to real."""
    s = star_mul(f, conjugate(f))
    coeffs = s.coeffs.copy()
    scale = max(1.0, float(np.abs(coeffs).max()))
    residue = float(np.abs(coeffs[:, 1:]).max(initial=0.0))
    if residue > tol * scale:
        raise SymmetrizationNotReal(
            f"imaginary residue {residue:.3g} exceeds {tol * scale:.3g}")
    coeffs[:, 1:] = 0.0
    return TaylorSeries(coeffs, s.coeff_bound, s.growth_rate, s.exact)


def star_inverse(f: TaylorSeries, order=None) -> TaylorSeries:
    """*-inverse (f^s)^{-1} * f^c, defined when the constant term is nonzero."""
    a0 = f.coefficient(0)
    if abs(a0) <= 1e-13:
        raise NotInvertibleAtZero("constant coefficient is numerically zero")
    fs = symmetrize(f)
    if order is not None:
        n = order
    elif f.exact:
        n = max(2 * f.order, DEFAULT_ORDER)
    else:
        n = f.order
    s = _pad(fs.coeffs, n)[:, 0]
    b = np.zeros(n + 1)
    b[0] = 1.0 / s[0]
    for m in range(1, n + 1):
        b[m] = -b[0] * np.dot(s[1 : m + 1], b[m - 1 :: -1][: m])
    inv_fs = np.zeros((n + 1, 4))
    inv_fs[:, 0] = b
    coeffs = _qconv(inv_fs, conjugate(f).coeffs, n)
    return TaylorSeries(coeffs)


def evaluate(f: TaylorSeries, q: Quaternion, r_max=0.95):
    """Horner evaluation with left powers; returns (value, tail bound)."""
    aq = abs(q)
    if (not f.exact and f.growth_rate * aq >= 1.0) or aq > r_max + 1e-12:
        raise OutsideConvergence(
            f"|q| = {aq:.6g} outside certified radius (g = {f.growth_rate:.6g})")
    acc = f.coefficient(f.order)
    for m in range(f.order - 1, -1, -1):
        acc = q * acc + f.coefficient(m)
    return acc, f.tail_bound(aq)


def evaluate_many(f: TaylorSeries, points: np.ndarray, r_max=0.95):
    """Batched Horner evaluation; points is an (M, 4) array."""
    points = qarray.as_qarray(points)
    norms = qarray.qnorm(points)
    if np.any(norms > r_max + 1e-12) or (
            not f.exact and np.any(f.growth_rate * norms >= 1.0)):
        raise OutsideConvergence("some points outside certified radius")
    acc = np.broadcast_to(f.coeffs[f.order], points.shape).copy()
    for m in range(f.order - 1, -1, -1):
        acc = qarray.qmul(points, acc) + f.coeffs[m]
    if f.exact:
        return acc, np.zeros(points.shape[:-1])
    t = f.growth_rate * norms
    tails = np.where(t < 1.0, f.coeff_bound * t ** (f.order + 1) / (1.0 - t), np.inf)
    return acc, tails


def cullen_derivative(f: TaylorSeries) -> TaylorSeries:
    """Termwise derivative: sum q^{m-1} m a_m."""
    if f.order == 0:
        return TaylorSeries.constant(Quaternion(0.0))
    coeffs = f.coeffs[1:] * np.arange(1, f.order + 1)[:, None]
    return TaylorSeries(coeffs, exact=f.exact)


def spherical_derivative(f: TaylorSeries, p: Quaternion) -> Quaternion:
    """(2 Im p)^{-1} (f(p) - f(conj p)); undefined at real points."""
    im = p.imag()
    if p.im_norm() <= 1e-13 * max(1.0, abs(p)):
        raise RealPoint("spherical derivative undefined at real points")
    vp, _ = evaluate(f, p, r_max=abs(p))
    vpc, _ = evaluate(f, p.conj(), r_max=abs(p))
    return (im * 2.0).inverse() * (vp - vpc)


def left_linear_divide(f: TaylorSeries, p: Quaternion, tol=1e-9) -> TaylorSeries:
    """Solve f - f(p) = (q - p) * g for g at coefficient level.

    Uses the backward recurrence b_{m-1} = a_m + p b_m, which is stable for
    |p| < 1.  The value of g at conj(p) is the spherical derivative of f
    at p.
    """
    n = f.order
    if n == 0:
        return TaylorSeries.constant(Quaternion(0.0))
    a = [f.coefficient(m) for m in range(n + 1)]
    b = [Quaternion(0.0)] * n
    b[n - 1] = a[n]
    for m in range(n - 1, 0, -1):
        b[m - 1] = a[m] + p * b[m]
    # consistency: the reconstructed constant a_0 + p b_0 must match the
    # Horner value of f at p, i.e. |(a_0 - f(p)) + p b_0| must vanish
    acc = a[n]
    for m in range(n - 1, -1, -1):
        acc = p * acc + a[m]
    scale = max(1.0, float(f.coefficient_norms().max()))
    residual = abs(a[0] + p * b[0] - acc)
    if residual > tol * scale:
        raise InconsistentDivision(
            f"division residual {residual:.3g} exceeds {tol * scale:.3g}")
    return TaylorSeries.from_quaternions(b, exact=f.exact)


# -- linear helpers used by the expression backend --------------------


def _sum_order(f: TaylorSeries, g: TaylorSeries):
    """Common order and exactness for a sum; exact terms never truncate."""
    if f.exact and g.exact:
        return max(f.order, g.order), True
    if f.exact:
        return g.order, False
    if g.exact:
        return f.order, False
    return min(f.order, g.order), False


def series_add(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    n, exact = _sum_order(f, g)
    return TaylorSeries(_pad(f.coeffs, n) + _pad(g.coeffs, n), exact=exact)


def series_sub(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    n, exact = _sum_order(f, g)
    return TaylorSeries(_pad(f.coeffs, n) - _pad(g.coeffs, n), exact=exact)


def left_const_mul(c: Quaternion, f: TaylorSeries) -> TaylorSeries:
    """Coefficients c * a_m, i.e. the *-product Const(c) * f."""
    carr = qarray.from_quaternion(c)
    return TaylorSeries(qarray.qmul(carr, f.coeffs), exact=f.exact)


def right_const_mul(f: TaylorSeries, c: Quaternion) -> TaylorSeries:
    """Coefficients a_m * c, i.e. the *-product f * Const(c)."""
    carr = qarray.from_quaternion(c)
    return TaylorSeries(qarray.qmul(f.coeffs, carr), exact=f.exact)


def shift_up(f: TaylorSeries) -> TaylorSeries:
    """Multiply by q on the left: coefficients move one slot up."""
    coeffs = np.vstack([np.zeros((1, 4)), f.coeffs])
    return TaylorSeries(coeffs, exact=f.exact)
