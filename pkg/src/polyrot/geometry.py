"""Polytopes held in both vertex and half-space form.

Facet ``j`` is ``{x : normals[j] . x >= offsets[j]}`` with a unit inward
normal. Only simplices get automatic facet computation; other polytopes must
be given with their half-spaces.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    Degenerate,
    DimensionMismatch,
    DimensionTooSmall,
    RedundantFacet,
    SigmaNotContained,
    UnboundedOrInconsistent,
)
from .lp import nontrivial_cone_direction

EPS_GEOM = 1e-9
NORMAL_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    eps: float = EPS_GEOM

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_facets(self) -> int:
        return self.normals.shape[0]

    def slacks(self, x) -> np.ndarray:
        """Signed distances of ``x`` (shape (n,) or (k, n)) to every facet hyperplane."""
        return np.asarray(x, dtype=float) @ self.normals.T - self.offsets

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def diameter(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def transformed(self, R, shift) -> "Polytope":
        """Image under ``x -> R x + shift`` for an orthogonal ``R``."""
        R = np.asarray(R, dtype=float)
        shift = np.asarray(shift, dtype=float)
        normals = self.normals @ R.T
        return type(self)(
            _frozen(self.vertices @ R.T + shift),
            _frozen(normals),
            _frozen(self.offsets + normals @ shift),
            self.eps,
        )


@dataclass(frozen=True, eq=False)
class Simplex(Polytope):
    """n+1 affinely independent vertices; facet j is opposite vertex j."""


def simplex_from_vertices(points, eps: float = EPS_GEOM) -> Simplex:
    """Facets of the simplex spanned by ``points`` (n+1 points in R^n).

    Uses barycentric coordinates: the gradient of the j-th barycentric
    coordinate is normal to the facet opposite vertex j and points toward it.
    """
    V = np.asarray(points, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] + 1:
        raise DimensionMismatch(f"need n+1 points in R^n, got array of shape {V.shape}")
    n = V.shape[1]
    if n < 2:
        raise DimensionTooSmall("simplices need n >= 2")
    edges = (V[1:] - V[0]).T
    det = np.linalg.det(edges)
    if not abs(det) > eps:
        raise Degenerate(f"vertices are affinely dependent (|det| = {abs(det):.3g})")
    inv = np.linalg.inv(edges)
    grads = np.vstack([-inv.sum(axis=0), inv])
    normals = grads / np.linalg.norm(grads, axis=1)[:, None]
    offsets = np.empty(n + 1)
    for j in range(n + 1):
        others = np.delete(V, j, axis=0)
        offsets[j] = float(np.mean(others @ normals[j]))
    return Simplex(_frozen(V), _frozen(normals), _frozen(offsets), eps)


def polytope_from_h_and_v(vertices, facets, eps: float = EPS_GEOM) -> Polytope:
    """Validate a joint V/H description.

    ``facets`` is a sequence of ``(normal, offset)`` meaning ``normal . x >= offset``;
    normals are rescaled to unit length and flipped if every vertex lies on the
    other side. Duplicate facets (equal within 1e-9) are merged.
    """
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise DimensionMismatch("vertices must be a non-empty (k, n) array")
    n = V.shape[1]
    if n < 2:
        raise DimensionTooSmall("polytopes need n >= 2")
    if len(facets) == 0:
        raise UnboundedOrInconsistent("no facets given")
    normals, offsets = [], []
    for j, (normal, offset) in enumerate(facets):
        a = np.asarray(normal, dtype=float)
        if a.shape != (n,):
            raise DimensionMismatch(f"facet {j} normal has shape {a.shape}, expected ({n},)")
        length = np.linalg.norm(a)
        if length == 0.0:
            raise UnboundedOrInconsistent(f"facet {j} has a zero normal")
        a, b = a / length, float(offset) / length
        s = V @ a - b
        if s.min() < -eps:
            if (-s).min() >= -eps:
                a, b = -a, -b
            else:
                raise UnboundedOrInconsistent(
                    f"facet {j} is violated by vertices {np.flatnonzero(s < -eps).tolist()}"
                )
        if any(np.allclose(a, a2, atol=1e-9) and abs(b - b2) <= 1e-9 for a2, b2 in zip(normals, offsets)):
            continue
        normals.append(a)
        offsets.append(b)
    N = np.array(normals)
    off = np.array(offsets)
    for j in range(len(N)):
        on = V[np.abs(V @ N[j] - off[j]) <= eps]
        rank = np.linalg.matrix_rank(on[1:] - on[0], tol=eps) if len(on) > 1 else 0
        if rank < n - 1:
            raise RedundantFacet(f"facet {j} touches too few affinely independent vertices")
    if nontrivial_cone_direction(N) is not None:
        raise UnboundedOrInconsistent("half-spaces do not bound a polytope")
    return Polytope(_frozen(V), _frozen(N), _frozen(off), eps)


class Position(enum.Enum):
    INSIDE = "Inside"
    ON_BOUNDARY = "OnBoundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class Containment:
    position: Position
    facets: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        """True unless the point is outside (the polytope is closed)."""
        return self.position is not Position.OUTSIDE


def contains(P: Polytope, x, tol: float = EPS_GEOM) -> Containment:
    x = np.asarray(x, dtype=float)
    if x.shape != (P.n,):
        raise DimensionMismatch(f"point has shape {x.shape}, expected ({P.n},)")
    s = P.slacks(x)
    if s.min() > tol:
        return Containment(Position.INSIDE)
    if s.min() >= -tol:
        return Containment(Position.ON_BOUNDARY, tuple(np.flatnonzero(np.abs(s) <= tol).tolist()))
    return Containment(Position.OUTSIDE, tuple(np.flatnonzero(s < -tol).tolist()))


class VertexClass(enum.Enum):
    INTERIOR = "interior"
    FACET_INTERIOR = "facet-interior"
    LOWER_FACE = "lower-dimensional-face"


@dataclass(frozen=True)
class IncidenceMap:
    pairs: tuple[tuple[int, int], ...]
    classes: tuple[VertexClass, ...]
    facet_vertices: tuple[tuple[int, ...], ...] = field(default=())

    def untouched_facets(self) -> list[int]:
        return [j for j, vs in enumerate(self.facet_vertices) if not vs]

    def touched_facets(self) -> list[int]:
        return [j for j, vs in enumerate(self.facet_vertices) if vs]


def incidence(sigma: Polytope, tau: Polytope, tol: float = EPS_GEOM) -> IncidenceMap:
    """Which vertices of ``sigma`` lie on which facet hyperplanes of ``tau``."""
    if sigma.n != tau.n:
        raise DimensionMismatch(f"sigma is in R^{sigma.n}, tau in R^{tau.n}")
    S = tau.slacks(sigma.vertices)
    bad = [(i, np.flatnonzero(S[i] < -tol).tolist()) for i in range(len(S)) if S[i].min() < -tol]
    if bad:
        raise SigmaNotContained(f"vertices outside tau (vertex, facets): {bad}", bad)
    on = S <= tol
    pairs = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(on)))
    counts = on.sum(axis=1)
    classes = tuple(
        VertexClass.INTERIOR if c == 0 else VertexClass.FACET_INTERIOR if c == 1 else VertexClass.LOWER_FACE
        for c in counts
    )
    facet_vertices = tuple(tuple(np.flatnonzero(on[:, j]).tolist()) for j in range(tau.num_facets))
    return IncidenceMap(pairs, classes, facet_vertices)
