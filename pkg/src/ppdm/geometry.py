"""Room/trajectory data model, point-to-plane distances and rigid motions.

A wall is an oriented plane ``{x : <n, x> = q}`` with unit normal ``n``; the
signed distance from a waypoint ``r`` is ``q - <r, n>``.  A configuration
stacks K walls and N waypoints, and its distance matrix is
``D = 1 q^T - R^T N``.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InvalidInput

UNIT_TOL = 1e-12


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Plane:
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = _frozen(self.normal)
        if n.ndim != 1 or n.size not in (2, 3):
            raise InvalidInput("plane normal must be a 2- or 3-vector", normal=n)
        if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
            raise InvalidInput("plane normal is not unit length", normal=n)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def through(cls, normal, point):
        """Plane with the given normal (normalized here) passing through ``point``."""
        n = np.asarray(normal, float)
        n = n / np.linalg.norm(n)
        return cls(n, float(n @ np.asarray(point, float)))

    @property
    def dimension(self):
        return self.normal.size

    def flipped(self):
        return Plane(-self.normal, -self.offset)

    def point(self):
        """A point on the plane (its foot from the origin)."""
        return self.offset * self.normal


@dataclass(frozen=True, eq=False)
class Configuration:
    """K oriented walls plus N waypoints in dimension 2 or 3.

    Stored as arrays: ``normals`` (K, m), ``offsets`` (K,), ``waypoints`` (N, m).
    """

    normals: np.ndarray
    offsets: np.ndarray
    waypoints: np.ndarray

    def __post_init__(self):
        normals = _frozen(self.normals)
        offsets = _frozen(self.offsets).reshape(-1)
        waypoints = _frozen(self.waypoints)
        if normals.ndim != 2 or normals.shape[1] not in (2, 3):
            raise InvalidInput("normals must have shape (K, 2) or (K, 3)", shape=normals.shape)
        m = normals.shape[1]
        if waypoints.ndim == 1 and waypoints.size == m:
            waypoints = _frozen(waypoints.reshape(1, m))
        if waypoints.ndim != 2 or waypoints.shape[1] != m:
            raise InvalidInput("waypoints must have shape (N, m) matching the normals",
                               shape=waypoints.shape, dimension=m)
        if normals.shape[0] < 1 or waypoints.shape[0] < 1:
            raise InvalidInput("a configuration needs at least one wall and one waypoint")
        if offsets.shape[0] != normals.shape[0]:
            raise InvalidInput("one offset per wall is required")
        if not (np.all(np.isfinite(normals)) and np.all(np.isfinite(offsets))
                and np.all(np.isfinite(waypoints))):
            raise InvalidInput("configuration entries must be finite")
        bad = np.abs(np.linalg.norm(normals, axis=1) - 1.0) > UNIT_TOL
        if np.any(bad):
            raise InvalidInput("wall normals must be unit length", walls=np.flatnonzero(bad))
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "waypoints", waypoints)

    @classmethod
    def from_planes(cls, planes, waypoints):
        planes = list(planes)
        if not planes:
            raise InvalidInput("a configuration needs at least one wall")
        return cls(np.array([p.normal for p in planes]),
                   np.array([p.offset for p in planes]), waypoints)

    @property
    def dimension(self):
        return self.normals.shape[1]

    @property
    def n_walls(self):
        return self.normals.shape[0]

    @property
    def n_waypoints(self):
        return self.waypoints.shape[0]

    @property
    def planes(self):
        return [Plane(n, q) for n, q in zip(self.normals, self.offsets)]

    def with_waypoints(self, waypoints):
        return Configuration(self.normals, self.offsets, waypoints)

    def with_room(self, normals, offsets):
        return Configuration(normals, offsets, self.waypoints)

    def translated(self, t):
        t = np.asarray(t, float)
        return Configuration(self.normals, self.offsets + self.normals @ t, self.waypoints + t)

    def bounding_radius(self):
        """Scale used for tolerances: largest waypoint norm or |offset|, at least 1."""
        return float(max(1.0, np.max(np.linalg.norm(self.waypoints, axis=1)),
                         np.max(np.abs(self.offsets))))

    def __repr__(self):
        return f"Configuration(m={self.dimension}, K={self.n_walls}, N={self.n_waypoints})"


@dataclass(frozen=True, eq=False)
class RigidMotion:
    """x -> Q x + t with Q orthogonal (reflections allowed)."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        Q = _frozen(self.rotation)
        t = _frozen(self.translation).reshape(-1)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] != t.size:
            raise InvalidInput("rotation must be m x m and translation an m-vector")
        if np.max(np.abs(Q.T @ Q - np.eye(Q.shape[0]))) > 1e-12:
            raise InvalidInput("rotation matrix is not orthogonal")
        object.__setattr__(self, "rotation", Q)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls, m):
        return cls(np.eye(m), np.zeros(m))

    def inverse(self):
        return RigidMotion(self.rotation.T, -self.rotation.T @ self.translation)


def distance_from_tof(tau, c):
    """Echo delay (s) and propagation speed (m/s) to a one-way distance."""
    if c <= 0:
        raise InvalidInput("propagation speed must be positive", c=c)
    if np.any(np.asarray(tau) < 0):
        raise InvalidInput("time of flight must be non-negative", tau=tau)
    return 0.5 * c * np.asarray(tau, float) if np.ndim(tau) else 0.5 * c * float(tau)


def point_plane_distance(plane, point):
    point = np.asarray(point, float)
    if point.shape != plane.normal.shape:
        raise InvalidInput("point and plane dimensions differ",
                           point_dim=point.size, plane_dim=plane.dimension)
    return float(plane.offset - point @ plane.normal)


def compute_ppdm(config):
    """N x K matrix of signed distances ``q_k - <r_n, n_k>``."""
    return config.offsets[None, :] - config.waypoints @ config.normals.T


def apply_rigid_motion(config, motion):
    Q, t = motion.rotation, motion.translation
    if Q.shape[0] != config.dimension:
        raise InvalidInput("motion and configuration dimensions differ")
    normals = config.normals @ Q.T
    return Configuration(normals, config.offsets + normals @ t, config.waypoints @ Q.T + t)


def affine_rank(points, tol=1e-8):
    """Rank of the centred point cloud, singular values cut at ``tol`` x largest.

    The cut is also floored at ``tol`` in absolute terms so that a cloud of
    coincident points (all singular values at roundoff) has rank 0.
    """
    P = np.atleast_2d(np.asarray(points, float))
    if P.shape[0] < 1:
        raise InvalidInput("affine_rank needs at least one point")
    X = P - P.mean(axis=0)
    s = np.linalg.svd(X, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(P))))
    return int(np.sum(s > tol * max(s[0] if s.size else 0.0, scale)))


def _procrustes_candidates(H, tol=1e-9):
    """Orthogonal maps maximizing tr(Q^T H); all sign branches on the null part of H."""
    U, s, Vt = np.linalg.svd(H)
    m = H.shape[0]
    weak = [i for i in range(m) if s[i] <= tol * max(1.0, s[0])]
    out = []
    for signs in product((1.0, -1.0), repeat=len(weak)):
        d = np.ones(m)
        d[weak] = signs
        out.append(U @ np.diag(d) @ Vt)
    return out


def _motion_residual(a, b, Q, t):
    wp = np.linalg.norm(a.waypoints @ Q.T + t - b.waypoints, axis=1)
    na = a.normals @ Q.T
    dn = np.linalg.norm(na - b.normals, axis=1)
    # offset transported with the averaged normal: keeps residual(a,b) == residual(b,a)
    dq = np.abs(a.offsets + 0.5 * (na + b.normals) @ t - b.offsets)
    return float(max(wp.max(), dn.max(), dq.max()))


def congruence_residual(a, b, return_motion=False):
    """Upper bound on min over rigid motions g of the mismatch between g(a) and b.

    Walls and waypoints correspond by index.  The motion comes from an
    orthogonal Procrustes fit of the centred waypoints; when either trajectory
    is affinely deficient the wall normals join the fit.  Mismatch is the
    largest Euclidean error over waypoints, normals and offsets.
    """
    _check_same_shape(a, b)
    m = a.dimension
    ca, cb = a.waypoints.mean(axis=0), b.waypoints.mean(axis=0)
    A, B = a.waypoints - ca, b.waypoints - cb
    H = B.T @ A
    if min(affine_rank(a.waypoints), affine_rank(b.waypoints)) < m:
        w = max(1.0, float(np.sqrt(np.mean(np.sum(A * A, axis=1)))))
        H = H + w * w * (b.normals.T @ a.normals)
    best, best_motion = np.inf, None
    for Q in _procrustes_candidates(H):
        t = cb - Q @ ca
        r = _motion_residual(a, b, Q, t)
        if r < best:
            best, best_motion = r, (Q, t)
    if return_motion:
        Q, t = best_motion
        Q = _nearest_orthogonal(Q)
        return best, RigidMotion(Q, t)
    return best


def room_congruence_residual(a, b):
    """Congruence of the rooms alone (waypoints ignored)."""
    _check_same_dims(a, b)
    if a.n_walls != b.n_walls:
        raise InvalidInput("rooms have different wall counts")
    best = np.inf
    for Q in _procrustes_candidates(b.normals.T @ a.normals):
        na = a.normals @ Q.T
        t = np.linalg.lstsq(na, b.offsets - a.offsets, rcond=None)[0]
        dn = np.linalg.norm(na - b.normals, axis=1)
        dq = np.abs(a.offsets + 0.5 * (na + b.normals) @ t - b.offsets)
        best = min(best, float(max(dn.max(), dq.max())))
    return best


def lemma1_residual(a, b):
    """Residuals of the shared-PPDM condition after putting waypoint 1 at the origin.

    Returns ``(max |R0^T N0 - R^T N|, max_k |q0_k - q_k|)``; both vanish iff the
    two configurations have the same distance matrix.
    """
    _check_same_shape(a, b)
    a0 = a.translated(-a.waypoints[0])
    b0 = b.translated(-b.waypoints[0])
    gram = a0.waypoints @ a0.normals.T - b0.waypoints @ b0.normals.T
    return float(np.max(np.abs(gram))), float(np.max(np.abs(a0.offsets - b0.offsets)))


def _nearest_orthogonal(Q):
    U, _, Vt = np.linalg.svd(Q)
    return U @ Vt


def _check_same_dims(a, b):
    if a.dimension != b.dimension:
        raise InvalidInput("configurations have different dimensions",
                           dims=[a.dimension, b.dimension])


def _check_same_shape(a, b):
    _check_same_dims(a, b)
    if a.n_walls != b.n_walls or a.n_waypoints != b.n_waypoints:
        raise InvalidInput("configurations must have the same K and N",
                           a=[a.n_walls, a.n_waypoints], b=[b.n_walls, b.n_waypoints])


def angles_to_normal(theta, phi=None):
    """2D: normal at azimuth ``theta``.  3D: (inclination theta, azimuth phi)."""
    if phi is None:
        return np.array([np.cos(theta), np.sin(theta)])
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def normal_to_angles(n):
    """Inverse of ``angles_to_normal``: phi in [0, 2pi), theta in [0, pi]."""
    n = np.asarray(n, float)
    phi = float(np.mod(np.arctan2(n[1], n[0]), 2 * np.pi))
    if n.size == 2:
        return phi
    theta = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
    return theta, phi


def random_rotation(rng, m, reflect=None):
    """Haar-distributed orthogonal matrix; ``reflect`` forces det -1/+1 when given."""
    Z = rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if reflect is not None:
        want = -1.0 if reflect else 1.0
        if np.sign(np.linalg.det(Q)) != want:
            Q[:, 0] = -Q[:, 0]
    return Q
