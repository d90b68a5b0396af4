"""Regular Moebius transformations, Blaschke products and expression trees.

Two evaluation backends live here.  The exact backend walks an expression
tree and applies the pointwise evaluation rules of the *-calculus (products
and inverses evaluate through inner rotations q -> v^{-1} q v, the bullet
action through its conjugation factor phi).  The series backend lowers the
same tree to a :class:`~slicereg.series.TaylorSeries`.  Tests require the
two to agree within the certified truncation tail.
"""

from __future__ import annotations

import math

import numpy as np

from . import qarray, series as se
from .errors import PhiVanishes, SingularDenominator, SingularPoint
from .quaternion import Quaternion
from .series import TaylorSeries

__all__ = [
    "FunctionExpr",
    "Const",
    "Identity",
    "Moebius",
    "StarMul",
    "StarInv",
    "Conj",
    "Bullet",
    "Sum",
    "SeriesFunc",
    "MoebiusMap",
    "BlaschkeProduct",
    "moebius_classical_eval",
    "moebius_regular_eval",
    "expr_eval",
    "expr_conjugate",
    "expr_to_series",
    "blaschke_to_expr",
    "dieudonne_det",
    "expr_from_json",
    "neg",
]

_SING_TOL = 1e-13


def _check_ball(p: Quaternion, what="p"):
    if abs(p) >= 1.0 - 1e-13:
        raise ValueError(f"{what} must lie strictly inside the unit ball")


def _check_unimodular(u: Quaternion):
    if abs(abs(u) - 1.0) > 1e-12:
        raise ValueError("u must be unimodular")


def moebius_classical_eval(p: Quaternion, q: Quaternion) -> Quaternion:
    """Classical Moebius map M_p(q) = (1 - q conj(p))^{-1} (q - p)."""
    _check_ball(p)
    den = Quaternion(1.0) - q * p.conj()
    if abs(den) <= _SING_TOL:
        raise SingularDenominator(f"1 - q conj(p) vanishes at q={q!r}")
    return den.inverse() * (q - p)


class FunctionExpr:
    """Base node of the expression language; immutable after construction."""

    __slots__ = ("_conj_cache",)

    def __init__(self):
        object.__setattr__(self, "_conj_cache", None)

    # -- conjugation (memoized, involutive) ---------------------------

    def conjugate(self) -> "FunctionExpr":
        cached = self._conj_cache
        if cached is None:
            cached = self._build_conjugate()
            object.__setattr__(self, "_conj_cache", cached)
            if cached._conj_cache is None:
                object.__setattr__(cached, "_conj_cache", self)
        return cached

    def _build_conjugate(self) -> "FunctionExpr":
        raise NotImplementedError

    # -- evaluation ---------------------------------------------------

    def eval(self, q: Quaternion) -> Quaternion:
        out = self.eval_many(qarray.from_quaternion(q, (1,)))
        return qarray.to_quaternion(out[0])

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_series(self, order=se.DEFAULT_ORDER) -> TaylorSeries:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def __call__(self, q: Quaternion) -> Quaternion:
        return self.eval(q)


class Const(FunctionExpr):
    __slots__ = ("value",)

    def __init__(self, value: Quaternion):
        super().__init__()
        if isinstance(value, (int, float)):
            value = Quaternion(value)
        object.__setattr__(self, "value", value)

    def _build_conjugate(self):
        return Const(self.value.conj())

    def eval_many(self, points):
        return qarray.from_quaternion(self.value, points.shape[:-1])

    def to_series(self, order=se.DEFAULT_ORDER):
        return TaylorSeries.constant(self.value)

    def to_json(self):
        return {"kind": "const", "value": self.value.to_json()}

    def __repr__(self):
        return f"Const({self.value!r})"


class Identity(FunctionExpr):
    __slots__ = ()

    def _build_conjugate(self):
        return self

    def eval_many(self, points):
        return np.asarray(points, dtype=float)

    def to_series(self, order=se.DEFAULT_ORDER):
        return TaylorSeries.identity()

    def to_json(self):
        return {"kind": "identity"}

    def __repr__(self):
        return "Identity()"


class Moebius(FunctionExpr):
    """Regular Moebius transformation M_p followed by a right factor u."""

    __slots__ = ("p", "u")

    def __init__(self, p: Quaternion, u: Quaternion = Quaternion(1.0)):
        super().__init__()
        if isinstance(p, (int, float)):
            p = Quaternion(p)
        if isinstance(u, (int, float)):
            u = Quaternion(u)
        _check_ball(p)
        _check_unimodular(u)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "u", u)

    def _build_conjugate(self):
        if self.p.is_real() and self.u.is_real():
            return self
        # (M_p u)^c = conj(u) * M_{conj(p)} as a *-product
        return StarMul(Const(self.u.conj()), Moebius(self.p.conj()))

    def eval_many(self, points):
        q = qarray.as_qarray(points)
        p = self.p
        if not p.is_real():
            # inner rotation T_p(q) = (1 - q p)^{-1} q (1 - q p)
            den = qarray.one_like(q) - qarray.qmul(q, qarray.from_quaternion(p))
            q = qarray.qrotate(q, den)
        pbar = qarray.from_quaternion(p.conj())
        den = qarray.one_like(q) - qarray.qmul(q, pbar)
        if np.any(qarray.qnorm(den) <= _SING_TOL):
            raise SingularDenominator("1 - q conj(p) vanishes on a sample")
        out = qarray.qmul(qarray.qinv(den), q - qarray.from_quaternion(p))
        if self.u != Quaternion(1.0):
            out = qarray.qmul(out, qarray.from_quaternion(self.u))
        return out

    def to_series(self, order=se.DEFAULT_ORDER):
        p, u = self.p, self.u
        ap = abs(p)
        coeffs = [(-p) * u]
        pbar_pow = Quaternion(1.0)
        scale = 1.0 - ap * ap
        for _ in range(order):
            coeffs.append(pbar_pow * scale * u)
            pbar_pow = pbar_pow * p.conj()
        if ap > 0.0:
            cert = (max(ap, scale / ap), ap)
        else:
            cert = (2.0, 0.5)
        return TaylorSeries.from_quaternions(coeffs, *cert)

    def to_json(self):
        return {"kind": "moebius", "p": self.p.to_json(), "u": self.u.to_json()}

    def __repr__(self):
        return f"Moebius({self.p!r}, {self.u!r})"


class Sum(FunctionExpr):
    """Pointwise sum; needed by the conjugation rewrites of bullet nodes."""

    __slots__ = ("left", "right")

    def __init__(self, left: FunctionExpr, right: FunctionExpr):
        super().__init__()
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _build_conjugate(self):
        return Sum(self.left.conjugate(), self.right.conjugate())

    def eval_many(self, points):
        return self.left.eval_many(points) + self.right.eval_many(points)

    def to_series(self, order=se.DEFAULT_ORDER):
        return se.series_add(self.left.to_series(order), self.right.to_series(order))

    def to_json(self):
        return {"kind": "sum", "left": self.left.to_json(),
                "right": self.right.to_json()}

    def __repr__(self):
        return f"Sum({self.left!r}, {self.right!r})"


def neg(e: FunctionExpr) -> FunctionExpr:
    if isinstance(e, Const):
        return Const(-e.value)
    return StarMul(Const(Quaternion(-1.0)), e)


class StarMul(FunctionExpr):
    __slots__ = ("left", "right")

    def __init__(self, left: FunctionExpr, right: FunctionExpr):
        super().__init__()
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _build_conjugate(self):
        return StarMul(self.right.conjugate(), self.left.conjugate())

    def eval_many(self, points):
        # (f*g)(q) = f(q) g(f(q)^{-1} q f(q)), and 0 where f(q) = 0
        q = qarray.as_qarray(points)
        vf = self.left.eval_many(q)
        nonzero = qarray.qnorm2(vf) > 0.0
        rot = np.array(q, copy=True)
        if np.any(nonzero):
            rot[nonzero] = qarray.qrotate(q[nonzero], vf[nonzero])
        vg = self.right.eval_many(rot)
        out = qarray.qmul(vf, vg)
        out[~nonzero] = 0.0
        return out

    def to_series(self, order=se.DEFAULT_ORDER):
        return se.star_mul(self.left.to_series(order), self.right.to_series(order))

    def to_json(self):
        return {"kind": "star_mul", "left": self.left.to_json(),
                "right": self.right.to_json()}

    def __repr__(self):
        return f"StarMul({self.left!r}, {self.right!r})"


class StarInv(FunctionExpr):
    __slots__ = ("inner",)

    def __init__(self, inner: FunctionExpr):
        super().__init__()
        object.__setattr__(self, "inner", inner)

    def _build_conjugate(self):
        return StarInv(self.inner.conjugate())

    def eval_many(self, points):
        # h^{-*}(q) = h(h^c(q)^{-1} q h^c(q))^{-1}
        q = qarray.as_qarray(points)
        hc = self.inner.conjugate()
        c = hc.eval_many(q)
        if np.any(qarray.qnorm2(c) == 0.0):
            raise SingularPoint(f"conjugate of {self.inner!r} vanishes on a sample")
        rot = qarray.qrotate(q, c)
        v = self.inner.eval_many(rot)
        if np.any(qarray.qnorm(v) <= _SING_TOL):
            raise SingularPoint(f"sample lies on the singular sphere of {self!r}")
        return qarray.qinv(v)

    def to_series(self, order=se.DEFAULT_ORDER):
        return se.star_inverse(self.inner.to_series(order))

    def to_json(self):
        return {"kind": "star_inv", "inner": self.inner.to_json()}

    def __repr__(self):
        return f"StarInv({self.inner!r})"


class Conj(FunctionExpr):
    """Explicit regular-conjugate node; evaluates via the rewritten tree.

    The rewrite of the inner conjugate is resolved at construction time:
    resolving it lazily could hand back this very node through the
    memoized involution back-pointer and loop forever.
    """

    __slots__ = ("inner", "_rewritten")

    def __init__(self, inner: FunctionExpr):
        super().__init__()
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "_rewritten", inner.conjugate())

    def _build_conjugate(self):
        return self.inner

    def eval_many(self, points):
        return self._rewritten.eval_many(points)

    def to_series(self, order=se.DEFAULT_ORDER):
        return se.conjugate(self.inner.to_series(order))

    def to_json(self):
        return {"kind": "conj", "inner": self.inner.to_json()}

    def __repr__(self):
        return f"Conj({self.inner!r})"


class Bullet(FunctionExpr):
    """The action M_p . f = (f - p) * (1 - conj(p) * f)^{-*} of Sp(1,1)."""

    __slots__ = ("p", "inner")

    def __init__(self, p: Quaternion, inner: FunctionExpr):
        super().__init__()
        if isinstance(p, (int, float)):
            p = Quaternion(p)
        _check_ball(p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "inner", inner)

    def _build_conjugate(self):
        if self.p == Quaternion(0.0):
            return self.inner.conjugate()
        fc = self.inner.conjugate()
        num = Sum(fc, Const(-self.p.conj()))
        den = Sum(Const(Quaternion(1.0)), neg(StarMul(fc, Const(self.p))))
        return StarMul(StarInv(den), num)

    def eval_many(self, points):
        # (M_p . f)(q) = M_p(f(T~(q))), T~(q) = phi^{-1} q phi,
        # phi(q) = 1 - p f^c(p^{-1} q p)
        q = qarray.as_qarray(points)
        p = self.p
        if p == Quaternion(0.0):
            return self.inner.eval_many(q)
        rot1 = q if p.is_real() else qarray.qrotate(q, qarray.from_quaternion(p))
        fc_vals = self.inner.conjugate().eval_many(rot1)
        phi = qarray.one_like(q) - qarray.qmul(qarray.from_quaternion(p), fc_vals)
        if np.any(qarray.qnorm(phi) <= _SING_TOL):
            raise PhiVanishes(f"phi vanishes on a sample of {self!r}")
        tq = qarray.qrotate(q, phi)
        vf = self.inner.eval_many(tq)
        pbar = qarray.from_quaternion(p.conj())
        den = qarray.one_like(q) - qarray.qmul(vf, pbar)
        if np.any(qarray.qnorm(den) <= _SING_TOL):
            raise SingularDenominator(f"bullet denominator vanishes in {self!r}")
        return qarray.qmul(qarray.qinv(den), vf - qarray.from_quaternion(p))

    def to_series(self, order=se.DEFAULT_ORDER):
        fs = self.inner.to_series(order)
        num = se.series_sub(fs, TaylorSeries.constant(self.p))
        den = se.series_sub(TaylorSeries.constant(Quaternion(1.0)),
                            se.left_const_mul(self.p.conj(), fs))
        return se.star_mul(num, se.star_inverse(den))

    def to_json(self):
        return {"kind": "bullet", "p": self.p.to_json(),
                "inner": self.inner.to_json()}

    def __repr__(self):
        return f"Bullet({self.p!r}, {self.inner!r})"


class SeriesFunc(FunctionExpr):
    """A truncated power series wrapped as an expression leaf."""

    __slots__ = ("series", "r_max")

    def __init__(self, series: TaylorSeries, r_max=0.95):
        super().__init__()
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "r_max", float(r_max))

    def _build_conjugate(self):
        return SeriesFunc(se.conjugate(self.series), self.r_max)

    def eval_many(self, points):
        vals, _ = se.evaluate_many(self.series, points, r_max=self.r_max)
        return vals

    def to_series(self, order=se.DEFAULT_ORDER):
        return self.series

    def to_json(self):
        return {"kind": "series", **self.series.to_json()}

    def __repr__(self):
        return f"SeriesFunc({self.series!r})"


# -- module-level operation wrappers ----------------------------------


def expr_eval(e: FunctionExpr, q: Quaternion) -> Quaternion:
    return e.eval(q)


def expr_conjugate(e: FunctionExpr) -> FunctionExpr:
    return e.conjugate()


def expr_to_series(e: FunctionExpr, order=None, r_max=0.95,
                   tail_target=1e-12, max_order=512) -> TaylorSeries:
    """Lower an expression to a series; adaptive order when none is given."""
    if order is not None:
        return e.to_series(order)
    n = se.DEFAULT_ORDER
    s = e.to_series(n)
    while s.tail_bound(r_max) > tail_target and n < max_order:
        n *= 2
        s = e.to_series(n)
    return s


# -- Moebius maps and Blaschke products -------------------------------


class MoebiusMap:
    """Parameter form (p, u) of a regular Moebius transformation."""

    __slots__ = ("p", "u")

    def __init__(self, p: Quaternion, u: Quaternion = Quaternion(1.0)):
        if isinstance(p, (int, float)):
            p = Quaternion(p)
        if isinstance(u, (int, float)):
            u = Quaternion(u)
        _check_ball(p)
        _check_unimodular(u)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "u", u)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusMap is immutable")

    def to_expr(self) -> Moebius:
        return Moebius(self.p, self.u)

    def __repr__(self):
        return f"MoebiusMap({self.p!r}, {self.u!r})"


def moebius_regular_eval(m: MoebiusMap, q: Quaternion) -> Quaternion:
    """Evaluate the regular map: M_p(T_p(q)) u with T_p the inner rotation."""
    p = m.p
    if not p.is_real():
        den = Quaternion(1.0) - q * p
        q = den.inverse() * q * den
    return moebius_classical_eval(p, q) * m.u


def moebius_regular_inverse_image(m: MoebiusMap, t: Quaternion) -> Quaternion:
    """Solve M_p-regular(q) u = t for q, via T_p^{-1} = T_{conj(p)}."""
    s = t * m.u.conj()
    p = m.p
    # classical inverse M_{-p}
    w = (Quaternion(1.0) + s * p.conj()).inverse() * (s + p)
    if p.is_real():
        return w
    den = Quaternion(1.0) - w * p.conj()
    return den.inverse() * w * den


class BlaschkeProduct:
    """Finite *-product of Moebius factors times a unimodular constant."""

    __slots__ = ("factors", "u")

    def __init__(self, factors, u: Quaternion = Quaternion(1.0)):
        factors = tuple(Quaternion(f) if isinstance(f, (int, float)) else f
                        for f in factors)
        if len(factors) < 1:
            raise ValueError("Blaschke product needs at least one factor")
        for f in factors:
            _check_ball(f, "factor")
        if isinstance(u, (int, float)):
            u = Quaternion(u)
        _check_unimodular(u)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "u", u)

    def __setattr__(self, name, value):
        raise AttributeError("BlaschkeProduct is immutable")

    @property
    def degree(self) -> int:
        return len(self.factors)

    def to_expr(self) -> FunctionExpr:
        return blaschke_to_expr(self)

    def __repr__(self):
        return f"BlaschkeProduct({list(self.factors)!r}, {self.u!r})"


def blaschke_to_expr(b: BlaschkeProduct) -> FunctionExpr:
    """Left-nested M_{s_1} * ... * M_{s_k} * u chain ending in Const(u)."""
    expr: FunctionExpr = Const(b.u)
    for s in reversed(b.factors):
        expr = StarMul(Moebius(s), expr)
    return expr


def dieudonne_det(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> float:
    """Dieudonne determinant of the quaternionic 2x2 matrix [[a, c], [b, d]]."""
    val = (a.abs2() * d.abs2() + b.abs2() * c.abs2()
           - 2.0 * (b * a.conj() * c * d.conj()).re)
    return math.sqrt(max(val, 0.0))


# -- JSON -------------------------------------------------------------


def expr_from_json(d) -> FunctionExpr:
    if isinstance(d, list):  # bare quaternion means a constant
        return Const(Quaternion.from_iter(d))
    kind = d["kind"]
    if kind == "const":
        return Const(Quaternion.from_iter(d["value"]))
    if kind == "identity":
        return Identity()
    if kind == "moebius":
        return Moebius(Quaternion.from_iter(d["p"]),
                       Quaternion.from_iter(d.get("u", [1, 0, 0, 0])))
    if kind == "star_mul":
        return StarMul(expr_from_json(d["left"]), expr_from_json(d["right"]))
    if kind == "star_inv":
        return StarInv(expr_from_json(d["inner"]))
    if kind == "conj":
        return Conj(expr_from_json(d["inner"]))
    if kind == "bullet":
        return Bullet(Quaternion.from_iter(d["p"]), expr_from_json(d["inner"]))
    if kind == "sum":
        return Sum(expr_from_json(d["left"]), expr_from_json(d["right"]))
    if kind == "series":
        return SeriesFunc(TaylorSeries.from_json(d))
    if kind == "blaschke":
        return blaschke_to_expr(BlaschkeProduct(
            [Quaternion.from_iter(f) for f in d["factors"]],
            Quaternion.from_iter(d.get("u", [1, 0, 0, 0]))))
    raise ValueError(f"unknown expression kind {kind!r}")
