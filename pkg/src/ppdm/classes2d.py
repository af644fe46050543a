"""Generators for the three families of ambiguous 2D configurations.

Each generator returns ``(reference, equivalent)``: two configurations with
the same distance matrix.  Wall normals are parametrized by azimuth, and the
equivalent room's normals are a fixed linear image of the reference ones
(or, for collinear trajectories, tied to them through one linear relation).
"""

from itertools import product

import numpy as np

from .errors import DegenerateClassParameters, InfeasibleParameters, InvalidInput
from .geometry import Configuration, angles_to_normal

RANK1_CORRIDOR = "Rank1Corridor"
RANK2_PARALLELOGRAM = "Rank2Parallelogram"
RANK3_LINEAR_TRAJECTORY = "Rank3LinearTrajectory"
CLASS_IDS_2D = (RANK1_CORRIDOR, RANK2_PARALLELOGRAM, RANK3_LINEAR_TRAJECTORY)

VALID_TOL = 1e-10


def _points(waypoints, m=2):
    P = np.atleast_2d(np.asarray(waypoints, float))
    if P.size == 0 or P.shape[1] != m:
        raise InvalidInput(f"need at least one {m}D waypoint")
    return P


def _offsets(offsets, k):
    q = np.asarray(offsets, float).reshape(-1)
    if q.size != k:
        raise InvalidInput("one offset per wall is required", expected=k, got=q.size)
    return q


# -- parallelograms ---------------------------------------------------------

def parallelogram_abc(a, b, d):
    """Coefficients of the quadratic in cos(2 phi) satisfied by reference azimuths."""
    s = a * a + b * b + d * d
    A = (a * a - b * b - d * d) ** 2 + 4 * a * a * b * b
    B = 2 * (a * a - b * b - d * d) * (s - 2)
    C = (s - 2) ** 2 - 4 * a * a * b * b
    return A, B, C


def parallelogram_unit_residual(phi, a, b, d):
    return (a * np.cos(phi) + b * np.sin(phi)) ** 2 + (d * np.sin(phi)) ** 2 - 1.0


def parallelogram_reference_angles(a, b, d, tol=VALID_TOL):
    """Azimuths phi in [0, 2pi) whose normals stay unit under T = [[a, b], [0, d]].

    All eight roots of the quadratic in cos(2 phi) are formed and only those
    passing the unit-norm check are kept; they come in antipodal pairs.
    """
    A, B, C = parallelogram_abc(a, b, d)
    if abs(A) < 1e-14:
        raise DegenerateClassParameters(
            "A = 0: T is a reflection or inconsistent", a=a, b=b, d=d)
    disc = B * B - 4 * A * C
    if disc < -1e-12:
        return []
    disc = max(disc, 0.0)
    found = []
    for x in ((-B + np.sqrt(disc)) / (2 * A), (-B - np.sqrt(disc)) / (2 * A)):
        if abs(x) > 1 + 1e-12:
            continue
        h = 0.5 * np.arccos(np.clip(x, -1.0, 1.0))
        for phi in (h, -h, h + np.pi, np.pi - h):
            phi = float(np.mod(phi, 2 * np.pi))
            if abs(parallelogram_unit_residual(phi, a, b, d)) <= tol:
                if all(abs(np.angle(np.exp(1j * (phi - f)))) > 1e-9 for f in found):
                    found.append(phi)
    return sorted(found)


def solve_parallelogram_params(phi1, phi3, d):
    """All (a, b) making the walls at ``phi1`` and ``phi3`` unit under [[a, b], [0, d]].

    ``a cos(phi) + b sin(phi) = +-sqrt(1 - d^2 sin^2 phi)`` for both angles is
    linear in (a, b); the four sign branches are returned in descending
    lexicographic order.
    """
    r = [1.0 - (d * np.sin(phi)) ** 2 for phi in (phi1, phi3)]
    for idx, val in zip((0, 1), r):
        if val < -1e-14:
            raise InfeasibleParameters("|d sin(phi)| > 1: no real (a, b)",
                                       equation="unit-norm", index=idx, d=d)
    M = np.array([[np.cos(phi1), np.sin(phi1)], [np.cos(phi3), np.sin(phi3)]])
    if abs(np.linalg.det(M)) < 1e-9:
        raise InfeasibleParameters("phi1 and phi3 are parallel", phi1=phi1, phi3=phi3)
    roots = np.sqrt(np.maximum(r, 0.0))
    branches = []
    for s1, s3 in product((1.0, -1.0), repeat=2):
        ab = np.linalg.solve(M, [s1 * roots[0], s3 * roots[1]])
        if all(abs(parallelogram_unit_residual(p, ab[0], ab[1], d)) <= VALID_TOL
               for p in (phi1, phi3)):
            if not any(np.allclose(ab, o, atol=1e-12) for o in branches):
                branches.append(ab)
    branches.sort(key=lambda ab: (ab[0], ab[1]), reverse=True)
    return [(float(a), float(b)) for a, b in branches]


def parallelogram_reference_room(phi1, phi3, extra_parallel_walls=(0, 0)):
    """Azimuths: phi1, phi1+pi, phi3, phi3+pi, then extra parallel copies."""
    n1, n3 = (list(extra_parallel_walls) + [0, 0])[:2]
    angles = [phi1, phi1 + np.pi, phi3, phi3 + np.pi]
    angles += [phi1 + (j % 2) * np.pi for j in range(n1)]
    angles += [phi3 + (j % 2) * np.pi for j in range(n3)]
    return np.array(angles)


def gen_parallelogram_pair(phi1, phi3, d, offsets, waypoints, extra_parallel_walls=(0, 0),
                           branch=0):
    """Parallelogram room (plus parallel walls) and one of its equivalents.

    The equivalent room has normals ``T n0`` with ``T = [[a, b], [0, d]]``,
    the same offsets, and waypoints ``T^{-T} r0``.
    """
    angles = parallelogram_reference_room(phi1, phi3, extra_parallel_walls)
    q = _offsets(offsets, angles.size)
    R0 = _points(waypoints)
    branches = solve_parallelogram_params(phi1, phi3, d)
    if not 0 <= branch < len(branches):
        raise InvalidInput("branch index out of range", branch=branch, available=len(branches))
    a, b = branches[branch]
    T = np.array([[a, b], [0.0, d]])
    N0 = np.array([angles_to_normal(p) for p in angles])
    reference = Configuration(N0, q, R0)
    if abs(b) < 1e-12 and abs(abs(a) - 1) < 1e-12 and abs(abs(d) - 1) < 1e-12:
        if a > 0 and d > 0:
            return reference, Configuration(N0, q, R0)
        raise DegenerateClassParameters("T is a reflection: equivalent room is congruent",
                                        a=a, b=b, d=d)
    if abs(a) < 1e-9 or abs(d) < 1e-9:
        raise InfeasibleParameters("T is singular", a=a, d=d)
    N = N0 @ T.T
    R = np.linalg.solve(T.T, R0.T).T
    return reference, Configuration(N, q, R)


# -- corridors --------------------------------------------------------------

def corridor_reference_angles(a, sides):
    return np.array([np.arctan(a) + s * np.pi for s in sides])


def gen_corridor_pair(a, offsets, waypoints0, free_coords, sides=None):
    """Parallel walls at azimuth atan(a) (+pi) and their axis-aligned equivalent.

    The equivalent keeps the offsets, fixes each waypoint's x coordinate by
    ``x = (x0 + a y0) / sqrt(1 + a^2)`` and takes y from ``free_coords``.
    """
    q = np.asarray(offsets, float).reshape(-1)
    K = q.size
    if K < 2:
        raise InvalidInput("a corridor needs at least two walls")
    if sides is None:
        sides = [k % 2 for k in range(K)]
    if len(sides) != K or any(s not in (0, 1) for s in sides):
        raise InvalidInput("sides must be a 0/1 choice per wall")
    R0 = _points(waypoints0)
    y = np.asarray(free_coords, float).reshape(-1)
    if y.size != R0.shape[0]:
        raise InvalidInput("one free coordinate per waypoint is required")
    angles = corridor_reference_angles(a, sides)
    N0 = np.array([angles_to_normal(p) for p in angles])
    b = np.sqrt(a * a + 1.0)
    # cos(phi_k) = b cos(phi0_k) is +-1; sin(phi_k) = 0
    N = np.column_stack([np.sign(b * N0[:, 0]), np.zeros(K)])
    # nullspace coefficients: r0 = (-a g1 - b g2, g1), r = (-g2, free)
    g1 = R0[:, 1]
    g2 = -(R0[:, 0] + a * g1) / b
    R = np.column_stack([-g2, y])
    return Configuration(N0, q, R0), Configuration(N, q, R)


# -- collinear trajectories ---------------------------------------------------

def linear_trajectory_angles(wall_angles, a, b, c, signs):
    """Equivalent azimuths ``s_k acos(w_k / sqrt(a^2+1)) - atan(a)``."""
    phi0 = np.asarray(wall_angles, float)
    w = b * np.cos(phi0) + c * np.sin(phi0)
    ratio = w / np.sqrt(a * a + 1.0)
    bad = np.flatnonzero(np.abs(ratio) > 1 + 1e-12)
    if bad.size:
        raise InfeasibleParameters("acos argument outside [-1, 1]", index=int(bad[0]),
                                   equation="linear-trajectory angle map")
    return np.asarray(signs, float) * np.arccos(np.clip(ratio, -1, 1)) - np.arctan(a)


def gen_linear_trajectory_pair_2d(wall_angles, a, b, c, offsets, gammas=None, signs=None,
                                  waypoints0=None):
    """Arbitrary room with a collinear trajectory and its equivalent.

    Waypoints are ``r0 = g (-b, -c)`` and ``r = g (-1, a)``; pass either the
    coefficients ``gammas`` or reference waypoints on that line.
    """
    phi0 = np.asarray(wall_angles, float).reshape(-1)
    K = phi0.size
    q = _offsets(offsets, K)
    if signs is None:
        signs = np.ones(K)
    signs = np.asarray(signs, float)
    if signs.size != K or not np.all(np.isin(signs, (-1.0, 1.0))):
        raise InvalidInput("signs must be +-1 per wall")
    phi = linear_trajectory_angles(phi0, a, b, c, signs)
    direction0 = np.array([-b, -c])
    gam = _line_coefficients(gammas, waypoints0, direction0)
    N0 = np.array([angles_to_normal(p) for p in phi0])
    N = np.array([angles_to_normal(p) for p in phi])
    R0 = np.outer(gam, direction0)
    R = np.outer(gam, [-1.0, a])
    return Configuration(N0, q, R0), Configuration(N, q, R)


def _line_coefficients(gammas, waypoints0, direction):
    if (gammas is None) == (waypoints0 is None):
        raise InvalidInput("pass exactly one of gammas or waypoints0")
    if gammas is not None:
        g = np.asarray(gammas, float).reshape(-1)
        if g.size < 1:
            raise InvalidInput("need at least one waypoint")
        return g
    P = _points(waypoints0, direction.size)
    dd = float(direction @ direction)
    if dd < 1e-24:
        if np.max(np.abs(P)) > 1e-12:
            raise InvalidInput("reference trajectory must sit at the origin for these parameters")
        return np.zeros(P.shape[0])
    g = P @ direction / dd
    off = np.max(np.linalg.norm(P - np.outer(g, direction), axis=1))
    if off > 1e-9 * max(1.0, float(np.max(np.abs(P)))):
        raise InvalidInput("reference waypoints are not on the admissible line",
                           direction=direction, deviation=off)
    return g
