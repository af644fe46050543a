"""Recover walls and waypoints from a bare distance matrix, up to rigid motion.

Anchoring waypoint 1 at the origin turns ``D = 1 q^T - R N^T`` into
``C = D - 1 d_1 = -(R - 1 r_1^T) N^T`` of rank m.  A rank-m SVD gives
``C = P Q^T`` up to an unknown m x m mixing; the mixing is fixed by asking
every recovered normal to be unit length.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import gram
from .errors import AmbiguousOrDegenerate, DegenerateTrajectoryOrRoom, InvalidInput
from .geometry import Configuration, compute_ppdm


@dataclass
class ReconstructionResult:
    configuration: Configuration
    ppdm_residual: float
    gram_conditioning: float
    unit_norm_residual: float
    ambiguous: bool
    kernel_dim: int

    def to_dict(self):
        return {"ppdm_residual": self.ppdm_residual, "gram_conditioning": self.gram_conditioning,
                "unit_norm_residual": self.unit_norm_residual, "ambiguous": self.ambiguous,
                "kernel_dim": self.kernel_dim}


def _matrix(d):
    D = np.atleast_2d(np.asarray(d, float))
    if D.ndim != 2 or not np.all(np.isfinite(D)):
        raise InvalidInput("distance matrix must be a finite 2D array")
    return D


def center_ppdm(d, anchor=0):
    """(C, q_hat): rows minus the anchor row, and the anchor row itself."""
    D = _matrix(d)
    if D.shape[0] < 2:
        raise InvalidInput("need at least two waypoints", n_waypoints=D.shape[0])
    if not 0 <= anchor < D.shape[0]:
        raise InvalidInput("anchor row out of range", anchor=anchor)
    q = D[anchor].copy()
    return D - q[None, :], q


def _most_definite(S0, kernel):
    """Point of S0 + span(kernel) maximizing the smallest eigenvalue."""
    if not kernel:
        return S0

    def neg_min_eig(t):
        S = S0 + sum((w * Z for w, Z in zip(t, kernel)), np.zeros_like(S0))
        return -np.linalg.eigvalsh(S)[0]

    fit = minimize(neg_min_eig, np.zeros(len(kernel)), method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    return S0 + sum((w * Z for w, Z in zip(fit.x, kernel)), np.zeros_like(S0))


def metric_upgrade(c, m, tol=1e-8, allow_ambiguous=False):
    """Factor C = -X N^T with unit-length rows of N.

    Returns ``(waypoints, normals, S, info)`` where waypoints are relative to
    the anchor and ``S = L^T L`` is the recovered metric.
    """
    C = _matrix(c)
    if m not in (2, 3):
        raise InvalidInput("dimension must be 2 or 3", dimension=m)
    U, s, Vt = np.linalg.svd(C, full_matrices=False)
    scale = max(1.0, float(np.max(np.abs(C))))
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0.0, scale)))
    if rank < m:
        raise DegenerateTrajectoryOrRoom(
            f"centred distance matrix has rank {rank} < {m}: coplanar/collinear waypoints "
            "or a degenerate room", rank=rank, dimension=m, singular_values=s)
    if rank > m:
        raise InvalidInput(f"centred distance matrix has rank {rank} > {m}",
                           rank=rank, singular_values=s)
    P = U[:, :m] * s[:m]
    Q = Vt[:m].T
    K = Q.shape[0]
    p = m * (m + 1) // 2
    kernel, sv = gram.unit_norm_kernel(Q, tol=tol)
    if K < p and not allow_ambiguous:
        raise AmbiguousOrDegenerate(
            f"{K} walls leave the {p}-parameter metric underdetermined",
            n_walls=K, required=p, kernel_dim=len(kernel))
    S, _, _ = gram.solve_unit_norm(Q)
    if kernel:
        S = _most_definite(S, kernel)
    S = 0.5 * (S + S.T)
    lam = np.linalg.eigvalsh(S)
    if lam[0] <= tol:
        raise AmbiguousOrDegenerate("metric is not positive definite",
                                    eigenvalues=lam, kernel_dim=len(kernel))
    L = gram.upper_factor(S)
    Nr = Q @ L.T
    unit_res = float(np.max(np.abs(np.linalg.norm(Nr, axis=1) - 1.0)))
    Nr = Nr / np.linalg.norm(Nr, axis=1, keepdims=True)
    X = -np.linalg.solve(L.T, P.T).T
    info = {"rank": rank, "singular_values": s, "kernel_dim": len(kernel),
            "quadric_sigma_min": float(sv[-1]), "unit_norm_residual": unit_res,
            "min_eigenvalue": float(lam[0]), "condition": float(lam[-1] / lam[0])}
    return X, Nr, S, info


def reconstruct_configuration(d, m, tol=1e-8, anchor=0, allow_ambiguous=False):
    """One representative (r_anchor = 0) of the configurations with distance matrix d."""
    D = _matrix(d)
    C, q = center_ppdm(D, anchor)
    X, N, S, info = metric_upgrade(C, m, tol, allow_ambiguous)
    X[anchor] = 0.0
    config = Configuration(N, q, X)
    res = float(np.max(np.abs(compute_ppdm(config) - D)))
    return ReconstructionResult(config, res, info["min_eigenvalue"], info["unit_norm_residual"],
                                info["kernel_dim"] > 0, info["kernel_dim"])
