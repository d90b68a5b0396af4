"""Hyperbolic geometry of the unit ball and difference quotients.

The hyperbolic difference quotient of a self-map f at p is the slice
regular function f*_p with two equivalent descriptions: the exact
expression M_p^{-*} * (M_{f(p)} . f) and, at series level, the product
(1 - q conj(p)) * R_{f,p} * (1 - conj(f(p)) * f)^{-*} where R is obtained
by left linear division.  The series form is the one used for evaluation
at p itself (the removable singularity of the exact form), which defines
the hyperbolic derivative f^h(p) = f*_p(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qarray, series as se
from .errors import DegenerateAtZero, SliceRegError
from .moebius import (
    Bullet,
    Const,
    FunctionExpr,
    Moebius,
    SeriesFunc,
    StarInv,
    StarMul,
    moebius_classical_eval,
)
from .quaternion import Quaternion
from .series import TaylorSeries

__all__ = [
    "rho",
    "delta",
    "BallSpec",
    "pseudo_ball_to_euclidean",
    "HyperbolicQuotient",
    "hyperbolic_quotient",
    "hyperbolic_derivative",
    "iterated_quotient",
    "quotient_series",
    "dieudonne_rhs",
    "dieudonne_sup_rhs",
    "goluzin_rhs",
    "balpha_bounds",
]

_UNIMODULAR_TOL = 1e-9
_PROBE_COUNT = 8


def rho(p: Quaternion, q: Quaternion) -> float:
    """Pseudo-hyperbolic distance |M_p(q)| on the unit ball."""
    if abs(p) >= 1.0 or abs(q) >= 1.0:
        raise ValueError("rho is defined for points inside the unit ball")
    return abs(moebius_classical_eval(p, q))


def delta(p: Quaternion, q: Quaternion) -> float:
    """Poincare distance atanh(rho(p, q))."""
    return math.atanh(rho(p, q))


@dataclass(frozen=True)
class BallSpec:
    """A ball in the unit ball, either pseudo-hyperbolic or Euclidean."""

    center: Quaternion
    radius: float
    kind: str = "pseudo"  # "pseudo" or "euclidean"

    def __post_init__(self):
        if self.kind not in ("pseudo", "euclidean"):
            raise ValueError("kind must be 'pseudo' or 'euclidean'")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.kind == "pseudo":
            if abs(self.center) >= 1.0 or not (0.0 < self.radius < 1.0):
                raise ValueError("pseudo ball needs |c0| < 1 and 0 < r0 < 1")

    def contains(self, q: Quaternion) -> bool:
        if self.kind == "pseudo":
            return rho(self.center, q) < self.radius
        return abs(q - self.center) < self.radius


def pseudo_ball_to_euclidean(b: BallSpec) -> BallSpec:
    """The pseudo-hyperbolic ball B_rho(c0, r0) as a Euclidean ball."""
    if b.kind != "pseudo":
        raise ValueError("expected a pseudo-hyperbolic BallSpec")
    c0, r0 = b.center, b.radius
    den = 1.0 - c0.abs2() * r0 * r0
    c1 = c0 * ((1.0 - r0 * r0) / den)
    r1 = r0 * (1.0 - c0.abs2()) / den
    return BallSpec(c1, r1, "euclidean")


# -- difference quotients ---------------------------------------------


def _probe_points() -> np.ndarray:
    rng = np.random.default_rng(987654321)
    return qarray.uniform_ball(rng, _PROBE_COUNT, 0.6)


_PROBES = _probe_points()


def _series_unimodular_constant(fs: TaylorSeries):
    """Coefficient-level unimodular-constant test for a series."""
    norms = fs.coefficient_norms()
    if fs.order >= 1 and norms[1:].max() > _UNIMODULAR_TOL:
        return None
    if abs(norms[0] - 1.0) > _UNIMODULAR_TOL:
        return None
    return fs.coefficient(0)


def detect_unimodular_constant(f: FunctionExpr):
    """Return u if f agrees with a unimodular constant u on the probes."""
    if isinstance(f, SeriesFunc):
        return _series_unimodular_constant(f.series)
    try:
        vals = f.eval_many(_PROBES)
    except SliceRegError:
        return None
    norms = qarray.qnorm(vals)
    if np.any(np.abs(norms - 1.0) > _UNIMODULAR_TOL):
        return None
    mean = vals.mean(axis=0)
    if np.any(qarray.qnorm(vals - mean) > _UNIMODULAR_TOL):
        return None
    return qarray.to_quaternion(mean)


def quotient_series(fs: TaylorSeries, p: Quaternion, fp: Quaternion = None,
                    order=None) -> TaylorSeries:
    """Series of f*_p: (1 - q conj(p)) * R_{f,p} * (1 - conj(f(p)) * f)^{-*}.

    R_{f,p} solves f - f(p) = (q - p) * R at coefficient level, so the
    removable singularity of the exact form on the sphere of p is already
    cancelled and the result converges on the whole ball.  ``order``
    controls the truncation order of the *-inverse factor (and hence of
    the result).
    """
    if fp is None:
        fp, _ = se.evaluate(fs, p, r_max=max(0.95, abs(p)))
    shifted = se.series_sub(fs, TaylorSeries.constant(fp))
    r_part = se.left_linear_divide(shifted, p)
    left = se.star_mul(TaylorSeries.linear(Quaternion(1.0), -p.conj()), r_part)
    den = se.series_sub(TaylorSeries.constant(Quaternion(1.0)),
                        se.left_const_mul(fp.conj(), fs))
    return se.star_mul(left, se.star_inverse(den, order=order))


class HyperbolicQuotient:
    """The quotient f*_p with its exact expression and lazy series."""

    __slots__ = ("base", "p", "result", "is_unimodular_constant",
                 "unimodular_value", "_series_cache")

    def __init__(self, base, p: Quaternion, result: FunctionExpr,
                 unimodular_value: Quaternion = None):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "result", result)
        object.__setattr__(self, "is_unimodular_constant",
                           unimodular_value is not None)
        object.__setattr__(self, "unimodular_value", unimodular_value)
        object.__setattr__(self, "_series_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("HyperbolicQuotient is immutable")

    def eval(self, q: Quaternion) -> Quaternion:
        try:
            return self.result.eval(q)
        except SliceRegError:
            # q sits on the singular sphere of the exact form, where the
            # quotient itself is regular: use the division-route series
            return self.eval_series(q)

    def eval_series(self, q: Quaternion, tail_target=1e-10,
                    max_order=512) -> Quaternion:
        r = abs(q)
        n = se.DEFAULT_ORDER
        s = self.to_series(n)
        while s.tail_bound(r) > tail_target and n < max_order:
            n *= 2
            s = self.to_series(n)
        val, _ = se.evaluate(s, q, r_max=max(0.95, r))
        return val

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        return self.result.eval_many(points)

    def to_series(self, order=se.DEFAULT_ORDER) -> TaylorSeries:
        cached = self._series_cache.get(order)
        if cached is not None:
            return cached
        # a cached series at higher order is at least as accurate
        for s in self._series_cache.values():
            if s.exact or s.order >= order:
                return s
        base = self.base
        fs = base if isinstance(base, TaylorSeries) else base.to_series(order)
        s = quotient_series(fs, self.p, order=order)
        self._series_cache[order] = s
        return s


def hyperbolic_quotient(f, p: Quaternion) -> HyperbolicQuotient:
    """Build f*_p = M_p^{-*} * (M_{f(p)} . f) for a self-map f of the ball.

    f may be a FunctionExpr or a TaylorSeries; a series input uses the
    division route throughout.  When f itself is (numerically) a unimodular
    constant the quotient is that same constant.
    """
    if isinstance(p, (int, float)):
        p = Quaternion(p)
    series_base = None
    if isinstance(f, TaylorSeries):
        series_base = f
        expr_f: FunctionExpr = SeriesFunc(f)
        fp, _ = se.evaluate(f, p, r_max=max(0.95, abs(p)))
    elif isinstance(f, HyperbolicQuotient):
        if f.is_unimodular_constant:
            u = f.unimodular_value
            return HyperbolicQuotient(f, p, Const(u), u)
        expr_f = f.result
        # a series-backed quotient keeps the chain on the series route,
        # avoiding exponential growth of nested exact trees
        if isinstance(expr_f, SeriesFunc):
            series_base = expr_f.series
        fp = f.eval(p)  # falls back to the series at removable singularities
    else:
        expr_f = f
        fp = f.eval(p)
    u_in = detect_unimodular_constant(expr_f)
    if u_in is not None:
        return HyperbolicQuotient(f, p, Const(u_in), u_in)
    if series_base is not None:
        qs = quotient_series(series_base, p, fp)
        result: FunctionExpr = SeriesFunc(qs)
        u_out = detect_unimodular_constant(result)
        hq = HyperbolicQuotient(f, p, result, u_out)
        hq._series_cache[qs.order] = qs
        return hq
    result = StarMul(StarInv(Moebius(p)), Bullet(fp, expr_f))
    u_out = detect_unimodular_constant(result)
    return HyperbolicQuotient(f, p, result, u_out)


def hyperbolic_derivative(f, p: Quaternion, tail_target=1e-10,
                          max_order=512) -> Quaternion:
    """f^h(p) = f*_p(p), evaluated through the series of the quotient."""
    if isinstance(p, (int, float)):
        p = Quaternion(p)
    hq = f if isinstance(f, HyperbolicQuotient) else hyperbolic_quotient(f, p)
    if hq.is_unimodular_constant:
        return hq.unimodular_value
    return hq.eval_series(hq.p, tail_target=tail_target, max_order=max_order)


def iterated_quotient(f, points) -> HyperbolicQuotient:
    """Fold of hyperbolic quotients f^{n} = (f^{n-1})*_{p_n}."""
    points = list(points)
    if not points:
        raise ValueError("iterated_quotient needs at least one point")
    cur = f
    hq = None
    for p in points:
        if hq is not None and hq.is_unimodular_constant:
            # further quotients of a unimodular constant stay that constant
            hq = HyperbolicQuotient(cur, Quaternion(p) if isinstance(
                p, (int, float)) else p, hq.result, hq.unimodular_value)
            continue
        hq = hyperbolic_quotient(cur, p)
        cur = hq
    return hq


# -- closed-form bounds -----------------------------------------------


def dieudonne_rhs(q0: Quaternion, fq0: Quaternion):
    """Euclidean disk guaranteed to contain f^h(q0) when f(0) = 0.

    Returns (center, radius) with center alpha^{-1} q0^{-1} f(q0) and
    radius (|q0|^2 - |f(q0)|^2) / (|q0| (1 - |f(q0)|^2)).
    """
    if abs(q0) <= 1e-13:
        raise DegenerateAtZero("bound degenerates at q0 = 0")
    if abs(q0) >= 1.0 or abs(fq0) >= 1.0:
        raise ValueError("q0 and f(q0) must lie inside the unit ball")
    a0, b0 = abs(q0), abs(fq0)
    alpha = (1.0 - b0 * b0) / (1.0 - a0 * a0)
    center = (q0.inverse() * fq0) / alpha
    radius = (a0 * a0 - b0 * b0) / (a0 * (1.0 - b0 * b0))
    return center, radius


def dieudonne_sup_rhs(q0abs: float, alpha: float) -> float:
    """Upper bound for |f^h(q0)|; branches at |q0| = sqrt(2) - 1."""
    if not 0.0 <= q0abs < 1.0:
        raise ValueError("q0abs must be in [0, 1)")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if q0abs <= math.sqrt(2.0) - 1.0:
        return 1.0 / alpha
    r2 = q0abs * q0abs
    return (1.0 + r2) ** 2 / (4.0 * q0abs * (1.0 - r2)) / alpha


def goluzin_rhs(dc0: float, q0abs: float) -> float:
    """Upper bound for |f^h(q0)| in terms of |d/dq f(0)| when f(0) = 0."""
    if not 0.0 <= dc0 <= 1.0 or not 0.0 <= q0abs < 1.0:
        raise ValueError("need dc0 in [0,1] and q0abs in [0,1)")
    t = 2.0 * q0abs / (1.0 + q0abs * q0abs)
    return (dc0 + t) / (1.0 + dc0 * t)


def balpha_bounds(alpha: float, qabs: float):
    """(lo, hi) with lo <= Re f^h(q) and |f^h(q)| <= hi for f(0)=0,
    f'(0) = alpha in [0, 1); also valid for f*_q(conj q)."""
    if not 0.0 <= alpha < 1.0 or not 0.0 <= qabs < 1.0:
        raise ValueError("need alpha in [0,1) and qabs in [0,1)")
    r = qabs
    lo = (alpha * r * r - 2.0 * r + alpha) / (r * r - 2.0 * alpha * r + 1.0)
    hi = (alpha * r * r + 2.0 * r + alpha) / (r * r + 2.0 * alpha * r + 1.0)
    return lo, hi
