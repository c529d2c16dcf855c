"""Independent reference computations used by the tests.

Nothing here calls the admissibility module; facet data is recomputed from
vertices with plain linear algebra.
"""

import numpy as np


def barycentric_gradients(V):
    """Rows are grad(lambda_j) for the simplex with vertex rows ``V``."""
    V = np.asarray(V, dtype=float)
    M = np.vstack([V.T, np.ones(len(V))])
    return np.linalg.inv(M)[:, :-1]


def inward_normals(V):
    g = barycentric_gradients(V)
    return g / np.linalg.norm(g, axis=1)[:, None]


def contact_pairs(sigma_V, tau_V, tol=1e-9):
    tau_V = np.asarray(tau_V, dtype=float)
    N = inward_normals(tau_V)
    b = np.array([N[j] @ tau_V[(j + 1) % len(tau_V)] for j in range(len(tau_V))])
    slack = np.asarray(sigma_V, dtype=float) @ N.T - b
    return [(i, j) for i, j in zip(*np.nonzero(np.abs(slack) <= tol))]


def sign_values(sigma_V, tau_V, S, points):
    """Normalized f_ij at each point, shape (num_points, num_pairs)."""
    N = inward_normals(tau_V)
    sigma_V = np.asarray(sigma_V, dtype=float)
    pts = np.atleast_2d(points)
    cols = []
    for i, j in contact_pairs(sigma_V, tau_V):
        g = np.asarray(S) @ N[j]
        cols.append((pts - sigma_V[i]) @ g / np.linalg.norm(g))
    return np.column_stack(cols) if cols else np.zeros((len(pts), 0))


def strict_sign_hits(sigma_V, tau_V, S, points, sense, margin=0.0):
    """Mask of points where every sense * f_ij exceeds ``margin``."""
    return np.all(sense * sign_values(sigma_V, tau_V, S, points) > margin, axis=1)


def grid(lo, hi, res):
    axes = [np.linspace(a, b, res) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


def inflated_box(V, factor=3.0):
    V = np.asarray(V, dtype=float)
    lo, hi = V.min(axis=0), V.max(axis=0)
    mid, half = (lo + hi) / 2, (hi - lo) / 2 * factor
    return mid - half, mid + half


def minkowski_constant(sigma_V, tau_V, S):
    """``sum_j c_j f_j`` for the full-contact pairing P_j on facet j.

    The barycentric gradients of a simplex sum to zero, so with
    ``c_j = |grad lambda_j|`` the weighted sum of the affine sign functions
    is constant in the centre.
    """
    g = barycentric_gradients(tau_V)
    P = np.asarray(sigma_V, dtype=float)
    return float(-sum((np.asarray(S) @ g[j]) @ P[j] for j in range(len(g))))


def rotate_points(S, q, t, X):
    """exp(tS) via scipy, applied about q."""
    from scipy.linalg import expm

    R = expm(t * np.asarray(S))
    return (np.atleast_2d(X) - q) @ R.T + q


def random_rotation(n, rng):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q
