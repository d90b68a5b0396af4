"""Nevanlinna-Pick interpolation with real nodes in the quaternionic ball.

Given distinct real nodes r_1..r_n in (-1, 1) and target values s_1..s_n in
the unit ball, a triangular table of quantities Q_k^l is built from Moebius
quotients; the modulus of the final entry Q_{n-1}^n decides between an
infinite solution family, a unique regular Blaschke solution, or no
solution.  Explicit interpolants are assembled as nested Moebius actions.
A Pick-matrix positivity criterion provides an independent solvability
check, and slice_extend lifts a one-slice complex function to its unique
slice regular extension.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import series as se
from .errors import (
    AmbiguousBoundary,
    KindMismatch,
    NotHermitian,
    NotSelfMap,
)
from .moebius import (
    Bullet,
    Const,
    FunctionExpr,
    Moebius,
    StarMul,
    moebius_classical_eval,
)
from .quaternion import Quaternion
from .series import TaylorSeries

__all__ = [
    "InterpolationProblem",
    "QCell",
    "QTable",
    "SolutionKind",
    "NON_SINGULAR",
    "SINGULAR",
    "NO_SOLUTION",
    "HermitianQuatMatrix",
    "pick_matrix",
    "psd_check",
    "build_q_table",
    "classify",
    "build_solution",
    "two_point_solve",
    "slice_extend",
]

# moduli within this distance of 1 are accepted as exactly unimodular
_UNIT_TOL = 1e-12
# moduli within this wider band of 1 (but beyond _UNIT_TOL) are ambiguous
_BAND_TOL = 1e-9
# tolerance for comparing two unimodular cell values
_CELL_EQ_TOL = 1e-9


class InterpolationProblem:
    """Real nodes r_1..r_n in (-1,1) with ball values s_1..s_n."""

    __slots__ = ("nodes", "values")

    def __init__(self, nodes, values):
        nodes = tuple(float(r) for r in nodes)
        values = tuple(Quaternion(s) if isinstance(s, (int, float)) else s
                       for s in values)
        if len(nodes) < 1 or len(nodes) != len(values):
            raise ValueError("need n >= 1 nodes with matching values")
        for r in nodes:
            if not -1.0 < r < 1.0:
                raise ValueError("nodes must lie in (-1, 1)")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if abs(nodes[i] - nodes[j]) <= 1e-12:
                    raise ValueError("nodes must be pairwise distinct")
        for s in values:
            if abs(s) >= 1.0:
                raise ValueError("values must lie inside the unit ball")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("InterpolationProblem is immutable")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def __repr__(self):
        return f"InterpolationProblem({list(self.nodes)!r}, {list(self.values)!r})"


@dataclass(frozen=True)
class QCell:
    """One table entry: inside the ball, on the boundary, infinite, or in
    the undecidable tolerance band around the boundary."""

    kind: str  # "ball" | "unimodular" | "infinity" | "ambiguous"
    value: Quaternion | None = None

    def to_json(self):
        return {"kind": self.kind,
                "value": None if self.value is None else self.value.to_json()}


def _tag(q: Quaternion) -> QCell:
    m = abs(q)
    if abs(m - 1.0) <= _UNIT_TOL:
        return QCell("unimodular", q / m)
    if abs(m - 1.0) <= _BAND_TOL:
        return QCell("ambiguous", q)
    if m < 1.0:
        return QCell("ball", q)
    # any finite value outside the closed ball plays the role of infinity
    return QCell("infinity", q)


class QTable:
    """Triangular table Q_k^l, 0 <= k <= n-1, k+1 <= l <= n (row 0 = values)."""

    __slots__ = ("problem", "cells")

    def __init__(self, problem: InterpolationProblem, cells):
        object.__setattr__(self, "problem", problem)
        object.__setattr__(self, "cells", dict(cells))

    def __setattr__(self, name, value):
        raise AttributeError("QTable is immutable")

    @property
    def n(self) -> int:
        return self.problem.n

    def cell(self, k: int, l: int) -> QCell:
        return self.cells[(k, l)]

    def to_json(self):
        return [{"k": k, "l": l, **c.to_json()}
                for (k, l), c in sorted(self.cells.items())]


@dataclass(frozen=True)
class SolutionKind:
    """Trichotomy of the solver: family / unique Blaschke / none."""

    variant: str  # "non_singular" | "singular" | "no_solution"
    kappa0: int | None = None

    def to_json(self):
        d = {"variant": self.variant}
        if self.kappa0 is not None:
            d["kappa0"] = self.kappa0
        return d


NON_SINGULAR = SolutionKind("non_singular")
NO_SOLUTION = SolutionKind("no_solution")


def SINGULAR(kappa0: int) -> SolutionKind:
    return SolutionKind("singular", kappa0)


def build_q_table(prob: InterpolationProblem) -> QTable:
    """Fill the table row by row with the three-way recurrence."""
    n = prob.n
    cells = {}
    for l in range(1, n + 1):
        cells[(0, l)] = QCell("ball", prob.values[l - 1])
    for k in range(1, n):
        a = cells[(k - 1, k)]
        for l in range(k + 1, n + 1):
            b = cells[(k - 1, l)]
            if a.kind == "ambiguous" or b.kind == "ambiguous":
                cells[(k, l)] = QCell("ambiguous",
                                      a.value if a.kind == "ambiguous"
                                      else b.value)
            elif a.kind == "ball" and b.kind == "ball":
                rk, rl = prob.nodes[k - 1], prob.nodes[l - 1]
                scale = moebius_classical_eval(Quaternion(rk), Quaternion(rl))
                val = scale.inverse() * moebius_classical_eval(a.value, b.value)
                cells[(k, l)] = _tag(val)
            elif (a.kind == "unimodular" and b.kind == "unimodular"
                  and abs(a.value - b.value) <= _CELL_EQ_TOL):
                cells[(k, l)] = QCell("unimodular", a.value)
            else:
                cells[(k, l)] = QCell("infinity")
    return QTable(prob, cells)


def classify(t: QTable) -> SolutionKind:
    """Apply the trichotomy on |Q_{n-1}^n|; refuse to guess in the band."""
    n = t.n
    for (k, l), c in sorted(t.cells.items()):
        if c.kind == "ambiguous":
            raise AmbiguousBoundary(
                f"|Q_{k}^{l}| falls in the boundary tolerance band",
                cell=(k, l))
    if n == 1:
        return NON_SINGULAR
    last = t.cell(n - 1, n)
    if last.kind == "ball":
        return NON_SINGULAR
    if last.kind == "infinity":
        return NO_SOLUTION
    # singular: kappa0 is the first all-unimodular row
    for k in range(1, n):
        row = [t.cell(k, l) for l in range(k + 1, n + 1)]
        if all(c.kind == "unimodular" for c in row):
            return SINGULAR(k)
    raise AssertionError("unreachable: unimodular tail without a full row")


def _as_h_expr(h) -> FunctionExpr:
    if h is None:
        return Const(Quaternion(0.0))
    if isinstance(h, (int, float)):
        h = Quaternion(h)
    if isinstance(h, Quaternion):
        if abs(h) > 1.0 + _UNIT_TOL:
            raise NotSelfMap("constant parameter h must have |h| <= 1")
        return Const(h)
    if isinstance(h, TaylorSeries):
        from .moebius import SeriesFunc
        h = SeriesFunc(h)
    if not isinstance(h, FunctionExpr):
        raise TypeError("h must be a quaternion, series or expression")
    from .hyperbolic import _PROBES
    from . import qarray
    vals = h.eval_many(_PROBES)
    if np.any(qarray.qnorm(vals) > 1.0 + _BAND_TOL):
        raise NotSelfMap("parameter h is not a self-map of the ball")
    return h


def build_solution(t: QTable, kind: SolutionKind, h=None) -> FunctionExpr:
    """Assemble the nested Moebius-action interpolant for the given kind.

    Non-singular: f = M_{-s_1}.(M_{r_1} * (M_{-Q_1^2}.(M_{r_2} * (... * h)))).
    Singular with degree k0: same chain stopped at level k0 with the
    unimodular constant u in place of the innermost parenthesis.
    """
    prob = t.problem
    if kind.variant == "no_solution":
        raise KindMismatch("no interpolant exists for this problem")
    if kind.variant == "singular":
        if h is not None:
            raise KindMismatch("the singular solution admits no parameter h")
        k0 = kind.kappa0
        expr: FunctionExpr = Const(t.cell(k0, k0 + 1).value)
        depth = k0
    else:
        expr = _as_h_expr(h)
        depth = prob.n
    for k in range(depth, 0, -1):
        qv = t.cell(k - 1, k).value
        expr = Bullet(-qv, StarMul(Moebius(Quaternion(prob.nodes[k - 1])), expr))
    return expr


def two_point_solve(r: float, p: float, s: Quaternion, q: Quaternion):
    """Two-node shortcut: returns (kind, Q) with Q = M_r(p)^{-1} M_s(q)."""
    prob = InterpolationProblem([r, p], [s, q])
    table = build_q_table(prob)
    kind = classify(table)
    cell = table.cell(1, 2)
    return kind, cell.value


# -- Pick matrix criterion --------------------------------------------


class HermitianQuatMatrix:
    """Square quaternion matrix with P_lm = conj(P_ml) and real diagonal."""

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=float)
        if entries.ndim != 3 or entries.shape[0] != entries.shape[1] \
                or entries.shape[2] != 4:
            raise ValueError("entries must be an (n, n, 4) array")
        scale = max(1.0, float(np.abs(entries).max()))
        conj_t = entries.transpose(1, 0, 2).copy()
        conj_t[:, :, 1:] = -conj_t[:, :, 1:]
        if np.abs(entries - conj_t).max() > 1e-12 * scale:
            raise NotHermitian("matrix is not quaternion-Hermitian")
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("HermitianQuatMatrix is immutable")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, m: int, l: int) -> Quaternion:
        return Quaternion.from_iter(self.entries[m, l])

    def complex_embedding(self) -> np.ndarray:
        """2n x 2n complex Hermitian matrix via a + bj -> [[a, b], [-b~, a~]]."""
        n = self.n
        a = self.entries[:, :, 0] + 1j * self.entries[:, :, 1]
        b = self.entries[:, :, 2] + 1j * self.entries[:, :, 3]
        out = np.empty((2 * n, 2 * n), dtype=complex)
        out[0::2, 0::2] = a
        out[0::2, 1::2] = b
        out[1::2, 0::2] = -np.conj(b)
        out[1::2, 1::2] = np.conj(a)
        return out


def pick_matrix(nodes, values, K: int = None) -> HermitianQuatMatrix:
    """Pick matrix with entries sum_k p_m^k (1 - s_m conj(s_l)) conj(p_l)^k.

    For real nodes the geometric series is summed in closed form,
    (1 - s_m conj(s_l)) / (1 - r_m r_l); otherwise the sum is truncated at
    K terms, chosen so the tail bound 2 t^{K+1}/(1-t) drops below 1e-12.
    """
    nodes = [Quaternion(r) if isinstance(r, (int, float)) else r for r in nodes]
    values = [Quaternion(s) if isinstance(s, (int, float)) else s
              for s in values]
    n = len(nodes)
    if n != len(values) or n < 1:
        raise ValueError("need matching nonempty nodes and values")
    for p in nodes:
        if abs(p) >= 1.0:
            raise ValueError("nodes must lie inside the unit ball")
    for s in values:
        if abs(s) >= 1.0:
            raise ValueError("values must lie inside the unit ball")
    entries = np.empty((n, n, 4))
    all_real = all(p.is_real() for p in nodes)
    for m in range(n):
        for l in range(n):
            w = Quaternion(1.0) - values[m] * values[l].conj()
            if all_real:
                ent = w / (1.0 - nodes[m].w * nodes[l].w)
            else:
                t = abs(nodes[m]) * abs(nodes[l])
                kk = K
                if kk is None:
                    kk = 1
                    while 2.0 * t ** (kk + 1) / (1.0 - t) > 1e-12:
                        kk += 1
                ent = Quaternion(0.0)
                pm_pow = Quaternion(1.0)
                pl_pow = Quaternion(1.0)
                for _ in range(kk + 1):
                    ent = ent + pm_pow * w * pl_pow.conj()
                    pm_pow = pm_pow * nodes[m]
                    pl_pow = pl_pow * nodes[l]
            entries[m, l] = ent.components()
    return HermitianQuatMatrix(entries)


def psd_check(P: HermitianQuatMatrix, tol: float = 1e-10):
    """(isPSD, minEig) of the complex embedding of P."""
    emb = P.complex_embedding()
    eigs = np.linalg.eigvalsh(emb)
    min_eig = float(eigs.min())
    scale = max(1.0, float(np.abs(eigs).max()))
    return min_eig >= -tol * scale, min_eig


# -- common-slice extension -------------------------------------------


def slice_extend(coeffs, axis: Quaternion, exact=False,
                 sample_count=720, radius_cap=0.95):
    """Extend a one-slice power series to a slice regular series on the ball.

    coeffs are complex coefficients over the slice of the imaginary unit
    ``axis``; the extension keeps the same coefficients, embedded into the
    quaternions as Re c + (Im c) * axis.  A sampled self-map check on the
    slice disk guards the precondition |f0| < 1.
    """
    if abs(axis.re) > 1e-12 or abs(abs(axis) - 1.0) > 1e-12:
        raise ValueError("axis must be an imaginary unit")
    cs = [complex(c) for c in coeffs]
    if not cs:
        raise ValueError("need at least one coefficient")
    # self-map check on the slice disk
    for idx in range(sample_count):
        ang = 2.0 * math.pi * idx / sample_count
        rad = radius_cap * ((idx % 24) + 1) / 24.0
        z = rad * cmath.exp(1j * ang)
        val = 0j
        for c in reversed(cs):
            val = val * z + c
        if abs(val) > 1.0 + 1e-9:
            raise NotSelfMap(
                f"|f0({z:.3g})| = {abs(val):.6g} leaves the unit disk")
    qs = [Quaternion(c.real) + axis * c.imag for c in cs]
    return TaylorSeries.from_quaternions(qs, exact=exact)
