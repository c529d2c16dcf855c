"""Skew-symmetric matrices (elements of so(n)) and the rotations they generate.

A direction of infinitesimal rotation is stored as its matrix ``S``; positive
multiples of ``S`` describe the same direction, so nothing here normalizes.
Finite rotations about a centre ``q`` act as ``x -> exp(tS)(x - q) + q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge, DimensionTooSmall, NotSkew, NotSquare

SKEW_TOL = 1e-12
MAX_DIM = 16


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """An exactly antisymmetric n x n real matrix. Build with :func:`make_skew`."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __neg__(self) -> "SkewMatrix":
        return _wrap(-self.entries)

    def scaled(self, c: float) -> "SkewMatrix":
        return _wrap(c * self.entries)

    def __matmul__(self, other):
        return self.entries @ other

    def norm(self) -> float:
        """Spectral norm (largest singular value)."""
        if not self.entries.any():
            return 0.0
        return float(np.linalg.norm(self.entries, 2))

    def is_zero(self) -> bool:
        return not self.entries.any()

    def tolist(self) -> list[list[float]]:
        return self.entries.tolist()


def _wrap(a: np.ndarray) -> SkewMatrix:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return SkewMatrix(a)


def make_skew(entries) -> SkewMatrix:
    """Validate ``entries`` and return the canonical antisymmetric part.

    Raises NotSquare, DimensionTooSmall / DimensionTooLarge, or NotSkew when
    ``max |A + A^T|`` exceeds 1e-12.
    """
    a = np.asarray(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 2:
        raise DimensionTooSmall(f"dimension must be at least 2, got {n}")
    if n > MAX_DIM:
        raise DimensionTooLarge(f"dimension capped at {MAX_DIM}, got {n}")
    if not np.all(np.isfinite(a)):
        raise NotSkew("matrix has non-finite entries")
    defect = float(np.max(np.abs(a + a.T)))
    if defect > SKEW_TOL:
        raise NotSkew(f"antisymmetry defect {defect:.3g} exceeds {SKEW_TOL:g}")
    return _wrap((a - a.T) / 2.0)


def skew_from_angle_2d(a: float) -> SkewMatrix:
    return make_skew([[0.0, -a], [a, 0.0]])


def skew_from_axis_3d(axis) -> SkewMatrix:
    """Cross-product matrix: ``skew_from_axis_3d(w) @ v == cross(w, v)``."""
    a, b, c = (float(v) for v in axis)
    return make_skew([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


def random_skew(n: int, rng: np.random.Generator, low: float = -1.0, high: float = 1.0) -> SkewMatrix:
    """Upper triangle i.i.d. uniform in [low, high], lower triangle mirrored."""
    upper = np.triu(rng.uniform(low, high, size=(n, n)), k=1)
    return make_skew(upper - upper.T)


@dataclass(frozen=True)
class SpectralBlocks:
    lambdas: tuple[float, ...]
    rank: int


def generic_rank(n: int) -> int:
    """Largest rank a skew matrix of size n can have."""
    return n if n % 2 == 0 else n - 1


def spectral_blocks(S: SkewMatrix, rank_tolerance: float = 1e-9) -> SpectralBlocks:
    """Block magnitudes of the real normal form of ``S``.

    Singular values of a skew matrix come in equal pairs, plus one zero when n
    is odd; each pair is one 2x2 rotation block. ``rank_tolerance`` is relative
    to the largest singular value.
    """
    sv = np.linalg.svd(S.entries, compute_uv=False)
    k = S.n // 2
    lambdas = [(sv[2 * i] + sv[2 * i + 1]) / 2.0 for i in range(k)]
    top = lambdas[0] if lambdas else 0.0
    if top == 0.0:
        return SpectralBlocks(tuple(float(v) for v in lambdas), 0)
    count = sum(1 for v in lambdas if v > rank_tolerance * top)
    return SpectralBlocks(tuple(float(v) for v in lambdas), 2 * count)


def _inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=1)))


def exp_map(S: SkewMatrix, t: float = 1.0) -> np.ndarray:
    """``exp(tS)`` by scaling and squaring of the Taylor series.

    The argument is halved until its infinity norm is below 0.5, the series is
    summed until terms drop under 1e-17 relative to the partial sum, and the
    result is squared back up.
    """
    a = t * S.entries
    n = S.n
    norm = _inf_norm(a)
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
        a = a / (2.0 ** squarings)
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if _inf_norm(term) < 1e-17:
            break
    for _ in range(squarings):
        result = result @ result
    return result


@dataclass(frozen=True, eq=False)
class CenteredRotation:
    S: SkewMatrix
    q: np.ndarray
    t: float

    def matrix(self) -> np.ndarray:
        return exp_map(self.S, self.t)


def _vec(x, n: int, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise DimensionMismatch(f"{name} has shape {v.shape}, expected ({n},)")
    return v


def apply_centered(rot: CenteredRotation, x) -> np.ndarray:
    """Image of ``x`` under the rotation ``exp(tS)`` about centre ``rot.q``."""
    n = rot.S.n
    q = _vec(rot.q, n, "centre")
    x = _vec(x, n, "point")
    return rot.matrix() @ (x - q) + q


def apply_rotation_matrix(R: np.ndarray, q, points) -> np.ndarray:
    """Vectorized variant for a precomputed ``R = exp(tS)``; ``points`` is (k, n)."""
    q = np.asarray(q, dtype=float)
    return (np.asarray(points, dtype=float) - q) @ R.T + q


def first_order_displacement(S: SkewMatrix, q, x, n_vec) -> float:
    """Coefficient of t in ``n . (exp_q(tS)(x) - x)``, i.e. ``(S n) . (q - x)``.

    Since S is antisymmetric, ``n . S(x - q) == (S n) . (q - x)``.
    """
    n = S.n
    q = _vec(q, n, "centre")
    x = _vec(x, n, "point")
    nv = _vec(n_vec, n, "normal")
    norm = float(np.linalg.norm(nv))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"normal must be a unit vector, has norm {norm}")
    return float((S.entries @ nv) @ (q - x))
