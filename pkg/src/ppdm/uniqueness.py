"""Decide whether a configuration's distance matrix pins it down up to rigid motion.

The room-side tests reduce to one linear question: is there a symmetric
``S != I`` with ``n_k^T S n_k = 1`` for every wall?  Such an S factors as
``T^T T`` and ``T`` maps the room to a different one with the same distances.
Trajectory-side tests are affine ranks.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import gram
from .classes2d import RANK1_CORRIDOR, RANK2_PARALLELOGRAM, RANK3_LINEAR_TRAJECTORY
from .classes3d import (RANK1_CORRIDOR_3D, RANK2_PARALLELEPIPED, RANK2_PRISM, RANK3_MISC,
                        RANK3_NAMES, RANK3_TWO_PARALLEL_SETS, RANK4_PLANAR_TRAJECTORY,
                        RANK5_LINEAR_TRAJECTORY, rank3_equivalent)
from .errors import InvalidInput
from .geometry import Configuration, Plane, affine_rank, congruence_residual

TOO_FEW_WALLS = "TooFewWalls"
UNIQUE = "Unique"
AMBIGUOUS = "Ambiguous"

__all__ = ["affine_rank", "normal_structure", "NormalStructure", "Rank3Solution",
           "rank3_feasibility_search", "rank3_feasibility_solve", "classify",
           "ClassificationReport", "TOO_FEW_WALLS", "UNIQUE", "AMBIGUOUS"]


def _normals(planes):
    if isinstance(planes, Configuration):
        return planes.normals
    if len(planes) and isinstance(planes[0], Plane):
        return np.array([p.normal for p in planes])
    N = np.atleast_2d(np.asarray(planes, float))
    if N.size == 0:
        raise InvalidInput("need at least one wall")
    return N


def _rank(M, tol):
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0]))) if s.size else 0


@dataclass
class NormalStructure:
    rank: int
    parallel_pairs: list
    common_direction: np.ndarray | None
    direction_classes: list

    def to_dict(self):
        return {"rank": self.rank, "parallel_pairs": [list(p) for p in self.parallel_pairs],
                "common_direction": None if self.common_direction is None
                else self.common_direction.tolist(),
                "direction_classes": [list(c) for c in self.direction_classes]}


def normal_structure(planes, tol=1e-8):
    """Rank of the stacked normals, parallel pairs and direction classes.

    Pairs are 0-based index pairs with ``|<n_i, n_j>| >= 1 - tol``.  For rank
    m - 1 the common direction (orthogonal to every normal) is returned with
    its first non-negligible component positive.
    """
    N = _normals(planes)
    K, m = N.shape
    rank = _rank(N, tol)
    G = np.abs(N @ N.T)
    pairs = [(i, j) for i in range(K) for j in range(i + 1, K) if G[i, j] >= 1 - tol]
    classes, seen = [], set()
    for i in range(K):
        if i in seen:
            continue
        group = [i] + [j for j in range(i + 1, K) if j not in seen and G[i, j] >= 1 - tol]
        seen.update(group)
        classes.append(group)
    common = None
    if rank == m - 1:
        common = np.linalg.svd(N)[2][-1]
        lead = np.flatnonzero(np.abs(common) > 1e-12)[0]
        common = common * np.sign(common[lead])
    return NormalStructure(rank, pairs, common, classes)


def _two_line_split(N, tol):
    """Split walls into two groups whose normals are coplanar (each group parallel
    to one line).  Returns (plane normal A, plane normal B, group A) or None."""
    K = N.shape[0]
    tried = []
    for i in range(K):
        for j in range(i + 1, K):
            p = np.cross(N[i], N[j])
            nrm = np.linalg.norm(p)
            if nrm < 1e-6:
                continue
            p = p / nrm
            if any(abs(abs(p @ t) - 1) < 1e-12 for t in tried):
                continue
            tried.append(p)
            in_a = np.abs(N @ p) <= tol
            rest = N[~in_a]
            if rest.shape[0] and _rank(rest, tol) <= 2:
                if rest.shape[0] == 1 or _rank(rest, tol) == 1:
                    pb = np.linalg.svd(np.vstack([rest, p]))[2][-1]
                else:
                    pb = np.linalg.svd(rest)[2][-1]
                return p, pb, np.flatnonzero(in_a)
    return None


@dataclass
class Rank3Solution:
    params: dict
    T: np.ndarray
    residual: float
    congruence: float
    method: str
    equivalent: Configuration = field(repr=False)

    def to_dict(self):
        return {"params": self.params, "T": self.T.tolist(), "residual": self.residual,
                "congruence": self.congruence, "method": self.method}


def _params_of(T):
    return dict(zip(RANK3_NAMES, map(float, (T[0, 0], T[0, 1], T[0, 2], T[1, 1], T[1, 2],
                                               T[2, 2]))))


def _sign_diagonal(T, tol=1e-6):
    return np.allclose(np.abs(T), np.eye(3), atol=tol)


def _solution(config, T, method, tol):
    N = config.normals @ T.T
    res = float(np.max(np.abs(np.sum(N * N, axis=1) - 1.0)))
    if res > max(tol, 1e-9) or _sign_diagonal(T) or abs(np.linalg.det(T)) < 1e-9:
        return None
    eq = rank3_equivalent(config, T)
    cong = congruence_residual(config, eq)
    if cong <= 1e-6 * config.bounding_radius():
        return None
    return Rank3Solution(_params_of(T), T, res, cong, method, eq)


def rank3_feasibility_search(config, restarts=32, tol=1e-9, seed=0, force_search=False,
                             rho=0.5):
    """Look for an upper-triangular T, not a reflection, keeping every normal unit.

    First the exact route: the null space of the quadric system.  Without a
    null space, ``sigma_min * rho / sqrt(K)`` lower-bounds the residual of any
    T with ``||T^T T - I||_F = rho``; the multi-start search then only runs on
    request (``force_search``) or when that bound is not conclusive.  Returns
    ``(solution or None, evidence)``.
    """
    if config.dimension != 3:
        raise InvalidInput("the rank-3 search needs a 3D configuration")
    N = config.normals
    K = N.shape[0]
    kernel, sv = gram.unit_norm_kernel(N, tol=1e-8)
    evidence = {"kernel_dim": len(kernel), "sigma_min": float(sv[-1]),
                "sigma_max": float(sv[0]), "restarts": 0, "best_residual": None}
    for Z in kernel:
        Zh = Z / np.max(np.abs(np.linalg.eigvalsh(Z)))
        sol = _solution(config, gram.upper_factor(np.eye(3) + rho * Zh), "kernel", tol)
        if sol is not None:
            evidence["best_residual"] = sol.residual
            return sol, evidence
    bound = float(sv[-1] * rho / np.sqrt(K))
    evidence["residual_lower_bound"] = bound
    if not force_search and bound > tol:
        return None, evidence

    def resid(x):
        T = _upper(x)
        r = np.sum((N @ T.T) ** 2, axis=1) - 1.0
        return np.append(r, np.linalg.norm(T.T @ T - np.eye(3)) - rho)

    best = np.inf
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        x0 = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 1.0]) + 0.4 * rng.standard_normal(6)
        fit = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=300)
        val = float(np.max(np.abs(resid(fit.x))))
        best = min(best, val)
        if val <= tol:
            sol = _solution(config, _upper(fit.x), "search", tol)
            if sol is not None:
                evidence.update(restarts=r + 1, best_residual=val)
                return sol, evidence
    evidence.update(restarts=restarts, best_residual=float(best))
    return None, evidence


def _upper(x):
    a, b, c, e, f, i = x
    return np.array([[a, b, c], [0.0, e, f], [0.0, 0.0, i]])


def rank3_feasibility_solve(config, restarts=32, tol=1e-9, seed=0):
    """T-parameters of a non-congruent equivalent room, or None."""
    sol, _ = rank3_feasibility_search(config, restarts, tol, seed)
    return None if sol is None else sol.params


@dataclass
class ClassificationReport:
    verdict: str
    matched_classes: list
    waypoint_affine_rank: int
    normal_rank: int
    details: dict

    @property
    def class_ids(self):
        return [m["class_id"] for m in self.matched_classes]

    def to_dict(self):
        return {"verdict": self.verdict, "matched_classes": self.matched_classes,
                "waypoint_affine_rank": self.waypoint_affine_rank,
                "normal_rank": self.normal_rank, "details": self.details}


def _match(out, class_id, **evidence):
    out.append({"class_id": class_id, "evidence": evidence})


def classify(config, tol=1e-8, restarts=32, seed=0):
    """Unique / Ambiguous verdict and the names of every matching ambiguity class."""
    m = config.dimension
    if m not in (2, 3):
        raise InvalidInput("dimension must be 2 or 3", dimension=m)
    K = config.n_walls
    arank = affine_rank(config.waypoints, tol)
    ns = normal_structure(config.normals, tol)
    n_dirs = len(ns.direction_classes)
    matched = []
    details = {"n_walls": K, "n_waypoints": config.n_waypoints,
               "direction_classes": n_dirs, "parallel_pairs": [list(p) for p in ns.parallel_pairs]}
    if m == 2:
        if arank <= 1:
            _match(matched, RANK3_LINEAR_TRAJECTORY, affine_rank=arank)
        if ns.rank == 1:
            _match(matched, RANK1_CORRIDOR, normal_rank=1)
        if n_dirs == 2:
            _match(matched, RANK2_PARALLELOGRAM, direction_classes=ns.direction_classes)
        kernel, sv = gram.unit_norm_kernel(config.normals, tol=tol)
        details.update(kernel_dim=len(kernel), sigma_min=float(sv[-1]))
    else:
        if K < 6:
            _match(matched, TOO_FEW_WALLS, n_walls=K)
        if arank <= 2:
            _match(matched, RANK4_PLANAR_TRAJECTORY, affine_rank=arank)
        if arank <= 1:
            _match(matched, RANK5_LINEAR_TRAJECTORY, affine_rank=arank)
        if ns.rank == 1:
            _match(matched, RANK1_CORRIDOR_3D, normal_rank=1)
        if ns.rank == 2:
            _match(matched, RANK2_PRISM, normal_rank=2,
                   common_direction=ns.common_direction.tolist())
            if n_dirs == 2:
                _match(matched, RANK2_PARALLELEPIPED, direction_classes=ns.direction_classes)
        if ns.rank == 3:
            split = _two_line_split(config.normals, tol)
            if split is not None:
                pa, pb, group = split
                _match(matched, RANK3_TWO_PARALLEL_SETS, plane_normals=[pa.tolist(), pb.tolist()],
                       group_a=group.tolist())
            sol, evidence = rank3_feasibility_search(config, restarts=restarts, seed=seed)
            details["rank3_search"] = evidence
            if sol is not None:
                _match(matched, RANK3_MISC, numerical=True, **sol.to_dict())
    verdict = AMBIGUOUS if matched else UNIQUE
    return ClassificationReport(verdict, matched, arank, ns.rank, details)
