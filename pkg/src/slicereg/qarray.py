"""Vectorized quaternion arrays.

Arrays of quaternions are plain float64 ndarrays whose last axis has length
4 (components w, x, y, z).  All sampling suites run through these helpers so
that 1e4+ point checks stay fast.
"""

from __future__ import annotations

import numpy as np

from .quaternion import Quaternion

__all__ = [
    "as_qarray",
    "from_quaternion",
    "to_quaternion",
    "qmul",
    "qconj",
    "qnorm",
    "qnorm2",
    "qinv",
    "qrotate",
    "classical_moebius",
    "uniform_ball",
]


def as_qarray(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 4:
        raise ValueError("quaternion array must have last axis of length 4")
    return a


def from_quaternion(q: Quaternion, shape=()) -> np.ndarray:
    out = np.empty(shape + (4,), dtype=float)
    out[...] = (q.w, q.x, q.y, q.z)
    return out


def to_quaternion(a) -> Quaternion:
    a = np.asarray(a, dtype=float)
    if a.shape != (4,):
        raise ValueError("expected a single quaternion (shape (4,))")
    return Quaternion(a[0], a[1], a[2], a[3])


def qmul(a, b) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm2(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


def qnorm(a) -> np.ndarray:
    return np.sqrt(qnorm2(a))


def qinv(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n2 = qnorm2(a)[..., None]
    return qconj(a) / n2


def qrotate(q, v) -> np.ndarray:
    """Inner conjugation v^{-1} q v; preserves Re q and |q|."""
    return qmul(qmul(qinv(v), q), v)


def one_like(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = np.zeros_like(a)
    out[..., 0] = 1.0
    return out


def classical_moebius(p, q) -> np.ndarray:
    """Classical Moebius map M_p(q) = (1 - q conj(p))^{-1} (q - p), batched.

    ``p`` may be a single Quaternion or an array broadcastable against q.
    """
    q = as_qarray(q)
    parr = from_quaternion(p) if isinstance(p, Quaternion) else as_qarray(p)
    den = one_like(q) - qmul(q, qconj(parr))
    return qmul(qinv(den), q - parr)


def uniform_ball(rng: np.random.Generator, count: int, radius_cap: float) -> np.ndarray:
    """Uniform samples from the solid 4-ball of the given radius."""
    g = rng.standard_normal((count, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius_cap * rng.random(count) ** 0.25
    return g * r[:, None]
