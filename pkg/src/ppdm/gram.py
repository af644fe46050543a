"""Linear system ``v_k^T S v_k = 1`` over symmetric S.

Rows use the isometric half-vectorization (off-diagonals scaled by sqrt 2) so
that ``row(v) @ svec(Z) == v^T Z v`` and ``||svec(Z)|| == ||Z||_F``.
"""

import numpy as np

SQRT2 = np.sqrt(2.0)


def _pairs(m):
    return [(i, i) for i in range(m)] + [(i, j) for i in range(m) for j in range(i + 1, m)]


def quadric_rows(vectors):
    V = np.atleast_2d(np.asarray(vectors, float))
    m = V.shape[1]
    cols = []
    for i, j in _pairs(m):
        cols.append(V[:, i] * V[:, i] if i == j else SQRT2 * V[:, i] * V[:, j])
    return np.stack(cols, axis=1)


def svec(S):
    S = np.asarray(S, float)
    return np.array([S[i, i] if i == j else SQRT2 * S[i, j] for i, j in _pairs(S.shape[0])])


def smat(v, m=None):
    v = np.asarray(v, float)
    if m is None:
        m = {3: 2, 6: 3}[v.size]
    S = np.zeros((m, m))
    for x, (i, j) in zip(v, _pairs(m)):
        if i == j:
            S[i, i] = x
        else:
            S[i, j] = S[j, i] = x / SQRT2
    return S


def unit_norm_kernel(vectors, tol=1e-8):
    """Orthonormal basis (Frobenius) of symmetric Z with ``v^T Z v = 0`` for all rows.

    Returns ``(basis, singular_values)``; the basis is empty when the only
    symmetric S with ``v^T S v = 1`` for every row is the identity.
    """
    A = quadric_rows(vectors)
    m = np.atleast_2d(vectors).shape[1]
    p = A.shape[1]
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    s_full = np.zeros(p)
    s_full[:s.size] = s
    rank = int(np.sum(s_full > tol * max(1.0, s_full[0])))
    return [smat(Vt[i], m) for i in range(rank, p)], s_full


def solve_unit_norm(vectors):
    """Least-squares symmetric S for ``v^T S v = 1``; returns (S, rank, residual)."""
    A = quadric_rows(vectors)
    m = np.atleast_2d(vectors).shape[1]
    x, _, rank, _ = np.linalg.lstsq(A, np.ones(A.shape[0]), rcond=None)
    S = smat(x, m)
    S = 0.5 * (S + S.T)
    res = float(np.max(np.abs(A @ svec(S) - 1.0)))
    return S, int(rank), res


def upper_factor(S):
    """Upper-triangular T with positive diagonal and ``T^T T = S`` (S positive definite)."""
    L = np.linalg.cholesky(S)
    return L.T
