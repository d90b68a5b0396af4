"""Sampling-based verification suites for the inequalities of the library.

Each suite draws deterministic samples from a seeded generator, measures the
worst violation of the inequality it checks, and reports pass/fail against
its tolerance.  Suites: spl (two-point Schwarz-Pick), spl3 (three-point),
multi (iterated quotients), dieudonne, goluzin, balpha, plus the backend
cross-check between exact expression trees and truncated series.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import qarray, series as se
from .errors import NotSelfMap
from .hyperbolic import (
    balpha_bounds,
    dieudonne_rhs,
    dieudonne_sup_rhs,
    goluzin_rhs,
    hyperbolic_derivative,
    hyperbolic_quotient,
    iterated_quotient,
)
from .moebius import (
    Bullet,
    Const,
    FunctionExpr,
    Identity,
    Moebius,
    SeriesFunc,
    StarMul,
    expr_to_series,
)
from .quaternion import Quaternion
from .series import TaylorSeries

__all__ = [
    "SamplerConfig",
    "VerificationReport",
    "sample_points",
    "check_self_map",
    "run_suite",
    "crosscheck",
    "SUITES",
    "default_tolerance",
]

_SUITE_TOL = {
    "spl": 1e-10,
    "spl3": 1e-10,
    "multi": 1e-9,
    "dieudonne": 1e-9,
    "goluzin": 1e-9,
    "balpha": 1e-9,
    "crosscheck": 1e-9,
}


def default_tolerance(suite: str) -> float:
    env = os.environ.get("SR_TOL")
    if env is not None:
        return float(env)
    return _SUITE_TOL[suite]


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    count: int = 1000
    radius_cap: float = 0.95
    distribution: str = "uniform-ball"  # or "slice-grid"

    def __post_init__(self):
        if not 0.0 < self.radius_cap <= 0.95:
            raise ValueError("radius_cap must be in (0, 0.95]")
        if self.distribution not in ("uniform-ball", "slice-grid"):
            raise ValueError("unknown distribution tag")


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    count: int
    seed: int
    max_violation: float
    worst_input: tuple
    tolerance: float
    passed: bool = field(default=False)

    def to_json(self):
        return {
            "suite": self.suite,
            "count": self.count,
            "seed": self.seed,
            "maxViolation": self.max_violation,
            "worstInput": [list(x) for x in self.worst_input],
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _report(suite, cfg, max_violation, worst_input, tol=None):
    tol = default_tolerance(suite) if tol is None else tol
    return VerificationReport(suite, cfg.count, cfg.seed,
                              float(max_violation), tuple(worst_input), tol,
                              bool(max_violation <= tol))


def sample_points(cfg: SamplerConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    if cfg.distribution == "uniform-ball":
        return qarray.uniform_ball(rng, cfg.count, cfg.radius_cap)
    # slice-grid: points x + y*I on random slices, on a polar grid
    axes = rng.standard_normal((cfg.count, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    k = int(np.ceil(np.sqrt(cfg.count)))
    radii = cfg.radius_cap * (np.arange(cfg.count) % k + 1) / k
    angles = 2.0 * np.pi * (np.arange(cfg.count) // k) / k
    out = np.zeros((cfg.count, 4))
    out[:, 0] = radii * np.cos(angles)
    out[:, 1:] = axes * (radii * np.sin(angles))[:, None]
    return out


def check_self_map(f: FunctionExpr, cfg: SamplerConfig = None):
    """Raise NotSelfMap unless sampled |f| stays within the closed ball."""
    cfg = cfg or SamplerConfig(seed=314159, count=1000)
    vals = f.eval_many(sample_points(cfg))
    worst = float(qarray.qnorm(vals).max())
    if worst > 1.0 + 1e-9:
        raise NotSelfMap(f"sampled |f| reaches {worst:.6g} > 1")


def _worst(points, violations):
    idx = int(np.argmax(violations))
    return violations[idx], (points[idx].tolist(),)


# -- Schwarz-Pick suites ----------------------------------------------


def _spl_violation(f: FunctionExpr, p: Quaternion, points) -> np.ndarray:
    """|(M_{f(p)} . f)(q)| - |M_p(q)| pointwise (should be <= 0)."""
    fp = f.eval(p)
    lhs = qarray.qnorm(Bullet(fp, f).eval_many(points))
    rhs = qarray.qnorm(Moebius(p).eval_many(points))
    return lhs - rhs


def suite_spl(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    check_self_map(f)
    points = sample_points(cfg)
    rng = np.random.default_rng(cfg.seed + 1)
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for p_arr in qarray.uniform_ball(rng, 4, 0.8):
        p = qarray.to_quaternion(p_arr)
        # skip samples too close to the equality point p
        keep = qarray.qnorm(points - p_arr) > 1e-6
        v = _spl_violation(f, p, points[keep])
        vmax, win = _worst(points[keep], v)
        if vmax > worst_v:
            worst_v, worst_in = vmax, (p_arr.tolist(), *win)
    return _report("spl", cfg, worst_v, worst_in)


def suite_spl3(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    check_self_map(f)
    points = sample_points(cfg)
    rng = np.random.default_rng(cfg.seed + 2)
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for _ in range(3):
        p, s = (qarray.to_quaternion(x)
                for x in qarray.uniform_ball(rng, 2, 0.7))
        hq = hyperbolic_quotient(f, p)
        if hq.is_unimodular_constant:
            continue
        s_arr = qarray.from_quaternion(s)
        keep = qarray.qnorm(points - s_arr) > 1e-6
        v = _spl_violation(hq.result, s, points[keep])
        vmax, win = _worst(points[keep], v)
        if vmax > worst_v:
            worst_v, worst_in = vmax, (p.to_json(), s.to_json(), *win)
    return _report("spl3", cfg, worst_v, worst_in)


def suite_multi(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    """|f^{n}(q)| <= 1 for iterated quotients at up to 3 random points."""
    check_self_map(f)
    points = sample_points(cfg)
    rng = np.random.default_rng(cfg.seed + 3)
    nodes = [qarray.to_quaternion(x) for x in qarray.uniform_ball(rng, 3, 0.6)]
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for depth in (1, 2, 3):
        hq = iterated_quotient(f, nodes[:depth])
        if hq.is_unimodular_constant:
            v = np.array([abs(abs(hq.unimodular_value) - 1.0)])
            pts = points[:1]
        else:
            v = qarray.qnorm(hq.eval_many(points)) - 1.0
            pts = points
        vmax, win = _worst(pts, v)
        if vmax > worst_v:
            worst_v, worst_in = vmax, win
    return _report("multi", cfg, worst_v, worst_in)


# -- estimate suites (require f(0) = 0) -------------------------------


def _require_zero_at_origin(f: FunctionExpr):
    if abs(f.eval(Quaternion(0.0))) > 1e-10:
        raise ValueError("this suite requires f(0) = 0")


def _fh_samples(f: FunctionExpr, cfg: SamplerConfig, cap=0.9):
    """Pairs (q0, f^h(q0)) on seeded samples, via the series backend."""
    fs = expr_to_series(f)
    rng = np.random.default_rng(cfg.seed)
    pts = qarray.uniform_ball(rng, cfg.count, min(cap, cfg.radius_cap))
    out = []
    for p_arr in pts:
        q0 = qarray.to_quaternion(p_arr)
        out.append((q0, hyperbolic_quotient(fs, q0)))
    return fs, out


def suite_dieudonne(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    check_self_map(f)
    _require_zero_at_origin(f)
    fs, pairs = _fh_samples(f, cfg)
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for q0, hq in pairs:
        if abs(q0) < 1e-3:
            continue
        fh = hyperbolic_derivative(hq, q0)
        fq0 = f.eval(q0)
        center, radius = dieudonne_rhs(q0, fq0)
        alpha = (1.0 - abs(fq0) ** 2) / (1.0 - abs(q0) ** 2)
        v = max(abs(fh - center) - radius,
                abs(fh) - dieudonne_sup_rhs(abs(q0), alpha))
        if v > worst_v:
            worst_v, worst_in = v, (q0.to_json(),)
    return _report("dieudonne", cfg, worst_v, worst_in)


def suite_goluzin(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    check_self_map(f)
    _require_zero_at_origin(f)
    fs, pairs = _fh_samples(f, cfg)
    dc0 = abs(se.evaluate(se.cullen_derivative(fs), Quaternion(0.0))[0])
    dc0 = min(dc0, 1.0)
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for q0, hq in pairs:
        fh = hyperbolic_derivative(hq, q0)
        v = abs(fh) - goluzin_rhs(dc0, abs(q0))
        if v > worst_v:
            worst_v, worst_in = v, (q0.to_json(),)
    return _report("goluzin", cfg, worst_v, worst_in)


def suite_balpha(f: FunctionExpr, cfg: SamplerConfig) -> VerificationReport:
    check_self_map(f)
    _require_zero_at_origin(f)
    fs, pairs = _fh_samples(f, cfg)
    a0 = se.evaluate(se.cullen_derivative(fs), Quaternion(0.0))[0]
    if not a0.is_real(1e-9) or not 0.0 <= a0.re < 1.0:
        raise ValueError("balpha suite requires real derivative at 0 in [0,1)")
    alpha = max(a0.re, 0.0)
    worst_v, worst_in = -np.inf, ((0, 0, 0, 0),)
    for q0, hq in pairs:
        fh = hyperbolic_derivative(hq, q0)
        lo, hi = balpha_bounds(alpha, abs(q0))
        v = max(lo - fh.re, abs(fh) - hi)
        if abs(q0) > 1e-3:
            star = hq.eval_series(q0.conj())
            v = max(v, lo - star.re, abs(star) - hi)
        if v > worst_v:
            worst_v, worst_in = v, (q0.to_json(),)
    return _report("balpha", cfg, worst_v, worst_in)


# -- backend cross-check ----------------------------------------------


def crosscheck(f: FunctionExpr, cfg: SamplerConfig,
               order: int = None) -> VerificationReport:
    """max over samples of |exact(f) - series(f)| - certified tail."""
    s = f.to_series(order) if order is not None else expr_to_series(f)
    points = sample_points(cfg)
    exact = f.eval_many(points)
    approx, tails = se.evaluate_many(s, points, r_max=cfg.radius_cap)
    v = qarray.qnorm(exact - approx) - tails
    vmax, win = _worst(points, v)
    return _report("crosscheck", cfg, vmax, win)


SUITES = {
    "spl": suite_spl,
    "spl3": suite_spl3,
    "multi": suite_multi,
    "dieudonne": suite_dieudonne,
    "goluzin": suite_goluzin,
    "balpha": suite_balpha,
}


def run_suite(name: str, f, cfg: SamplerConfig) -> VerificationReport:
    if isinstance(f, TaylorSeries):
        f = SeriesFunc(f)
    if name == "crosscheck":
        return crosscheck(f, cfg)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](f, cfg)


# -- random self-map generators (used by tests and demos) -------------


def random_blaschke_expr(rng: np.random.Generator, degree: int) -> FunctionExpr:
    from .moebius import BlaschkeProduct, blaschke_to_expr
    factors = [qarray.to_quaternion(x)
               for x in qarray.uniform_ball(rng, degree, 0.7)]
    u = rng.standard_normal(4)
    u /= np.linalg.norm(u)
    return blaschke_to_expr(BlaschkeProduct(factors, qarray.to_quaternion(u)))


def random_series_self_map(rng: np.random.Generator, order: int = 12) -> TaylorSeries:
    """Random truncated self-map: coefficients with total norm <= 1."""
    raw = rng.standard_normal((order + 1, 4)) * (0.5 ** np.arange(order + 1))[:, None]
    total = np.linalg.norm(raw, axis=1).sum()
    return TaylorSeries(raw / max(total / 0.95, 1.0), exact=True)
