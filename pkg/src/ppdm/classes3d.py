"""Generators for the seven families of ambiguous 3D configurations.

Normals use inclination/azimuth angles ``n = (sin t cos p, sin t sin p, cos t)``.
Every generator returns ``(reference, equivalent)`` with equal distance
matrices; ``gen_prism_pair`` also returns the rotation linking the rooms.
"""

from itertools import product

import numpy as np
from scipy.optimize import least_squares

from . import gram
from .errors import (DegenerateClassParameters, InfeasibleParameters, InvalidInput,
                     OverconstrainedClass)
from .geometry import Configuration, angles_to_normal

RANK1_CORRIDOR_3D = "Rank1Corridor3D"
RANK2_PARALLELEPIPED = "Rank2Parallelepiped"
RANK2_PRISM = "Rank2Prism"
RANK3_MISC = "Rank3Misc"
RANK3_TWO_PARALLEL_SETS = "Rank3TwoParallelSets"
RANK4_PLANAR_TRAJECTORY = "Rank4PlanarTrajectory"
RANK5_LINEAR_TRAJECTORY = "Rank5LinearTrajectory"
CLASS_IDS_3D = (RANK1_CORRIDOR_3D, RANK2_PARALLELEPIPED, RANK2_PRISM, RANK3_MISC,
                RANK3_TWO_PARALLEL_SETS, RANK4_PLANAR_TRAJECTORY, RANK5_LINEAR_TRAJECTORY)

VALID_TOL = 1e-10
RANK3_NAMES = ("a", "b", "c", "e", "f", "i")


def _points(waypoints):
    P = np.atleast_2d(np.asarray(waypoints, float))
    if P.size == 0 or P.shape[1] != 3:
        raise InvalidInput("need at least one 3D waypoint")
    return P


def _offsets(offsets, k):
    q = np.asarray(offsets, float).reshape(-1)
    if q.size != k:
        raise InvalidInput("one offset per wall is required", expected=k, got=q.size)
    return q


def walls_to_normals(walls):
    """(K, 2) array of (theta, phi) pairs, or an already-built (K, 3) normal array."""
    W = np.atleast_2d(np.asarray(walls, float))
    if W.shape[1] == 3:
        return W
    if W.shape[1] != 2:
        raise InvalidInput("walls must be (theta, phi) pairs or unit normals")
    return np.array([angles_to_normal(t, p) for t, p in W])


# -- rank 1: corridors ----------------------------------------------------------

def corridor3d_reference_normals(a, b, choices):
    """Normals from phi0 = atan(a) + s pi and tan(theta0) = 1 / (b cos phi0), + t pi."""
    out = []
    for s, t in choices:
        phi = np.arctan(a) + s * np.pi
        theta = np.arctan2(1.0, b * np.cos(phi)) + t * np.pi
        out.append(angles_to_normal(theta, phi))
    return np.array(out)


def gen_corridor3d_pair(a, b, offsets, waypoints0, free_yz, choices=None):
    """All walls parallel to (1, a, b); equivalent walls face +-x with free y, z."""
    q = np.asarray(offsets, float).reshape(-1)
    K = q.size
    if K < 1:
        raise InvalidInput("need at least one wall")
    if choices is None:
        choices = [(k % 2, 0) for k in range(K)]
    if len(choices) != K:
        raise InvalidInput("one (s, t) choice per wall is required")
    R0 = _points(waypoints0)
    yz = np.atleast_2d(np.asarray(free_yz, float))
    if yz.shape != (R0.shape[0], 2):
        raise InvalidInput("free_yz must hold one (y, z) pair per waypoint")
    N0 = corridor3d_reference_normals(a, b, choices)
    c = np.sqrt(1.0 + a * a + b * b)
    N = np.zeros_like(N0)
    N[:, 0] = np.sign(N0[:, 0])
    x = (R0[:, 0] + a * R0[:, 1] + b * R0[:, 2]) / c
    R = np.column_stack([x, yz])
    return Configuration(N0, q, R0), Configuration(N, q, R)


# -- rank 2: parallelepipeds without bases and prisms ---------------------------

def rank2_abc(a, b, c, d, f):
    A = -a * a + b * b + c * c - d * d - f * f
    B = 2 * (a * b - c * d)
    C = a * a + b * b - c * c - d * d - f * f + 2
    return A, B, C


def rank2_reference_normal(a, b, phi):
    """Unit normal with azimuth phi satisfying ``cos theta = a X + b Y``."""
    g = a * np.cos(phi) + b * np.sin(phi)
    return np.array([np.cos(phi), np.sin(phi), g]) / np.sqrt(1.0 + g * g)


def rank2_unit_residual(n0, c, d, f):
    """``(c X + d Y)^2 + (f Y)^2 - 1`` for reference normal (X, Y, Z)."""
    X, Y = n0[..., 0], n0[..., 1]
    return (c * X + d * Y) ** 2 + (f * Y) ** 2 - 1.0


def rank2_matrix(a, b, c, d, f):
    """4 x 2 dependency matrix: (cos t0, X, Y, Z) = T (X0, Y0)."""
    return np.array([[a, b], [c, d], [0.0, f], [0.0, 0.0]])


def parallelepiped_reference_azimuths(a, b, c, d, f, tol=VALID_TOL):
    """Azimuths solving the quadratic in cos(2 phi), filtered by the unit-norm check."""
    A, B, C = rank2_abc(a, b, c, d, f)
    den = A * A + B * B
    if den < 1e-14:
        raise DegenerateClassParameters("A^2 + B^2 = 0: use the prism class", A=A, B=B)
    disc = A * A * C * C - den * (C * C - B * B)
    if disc < -1e-12:
        return []
    disc = max(disc, 0.0)
    found = []
    for x in ((A * C + np.sqrt(disc)) / den, (A * C - np.sqrt(disc)) / den):
        if abs(x) > 1 + 1e-12:
            continue
        h = 0.5 * np.arccos(np.clip(x, -1, 1))
        for phi in (h, -h, h + np.pi, np.pi - h):
            phi = float(np.mod(phi, 2 * np.pi))
            if abs(rank2_unit_residual(rank2_reference_normal(a, b, phi), c, d, f)) <= tol:
                if all(abs(np.angle(np.exp(1j * (phi - p)))) > 1e-9 for p in found):
                    found.append(phi)
    return sorted(found)


def solve_parallelepiped_params(a, b, phi1, phi3, f):
    """Sign branches of (c, d) putting both reference walls on the unit sphere."""
    rows, rhs = [], []
    for idx, phi in enumerate((phi1, phi3)):
        g = a * np.cos(phi) + b * np.sin(phi)
        val = 1.0 + g * g - (f * np.sin(phi)) ** 2
        if val < -1e-14:
            raise InfeasibleParameters("no real (c, d) for this wall", index=idx,
                                       equation="parallelepiped quadratic")
        rows.append([np.cos(phi), np.sin(phi)])
        rhs.append(np.sqrt(max(val, 0.0)))
    M = np.array(rows)
    if abs(np.linalg.det(M)) < 1e-9:
        raise InfeasibleParameters("phi1 and phi3 give parallel walls", phi1=phi1, phi3=phi3)
    out = []
    for s1, s3 in product((1.0, -1.0), repeat=2):
        cd = np.linalg.solve(M, [s1 * rhs[0], s3 * rhs[1]])
        if not any(np.allclose(cd, o, atol=1e-12) for o in out):
            out.append(cd)
    out.sort(key=lambda v: (v[0], v[1]), reverse=True)
    return [(float(c), float(d)) for c, d in out]


def _rank2_waypoints(R0, a, b, c, d, f, z):
    # <r, (cX+dY, fY, 0)> = <r0, (X, Y, aX+bY)> for every X, Y
    x = (R0[:, 0] + a * R0[:, 2]) / c
    y = (R0[:, 1] + b * R0[:, 2] - d * x) / f
    return np.column_stack([x, y, z])


def gen_parallelepiped_pair(phi1, phi3, f, offsets, waypoints0, a=0.0, b=0.0,
                            parallel_copies=(0, 0), branch=0, free_z=None):
    """Two wall directions plus opposite walls; equivalent walls are all vertical.

    Reference normals have azimuths phi1, phi3 and ``cos theta0 = a X0 + b Y0``;
    the walls facing them are their antipodes.  The equivalent normal is
    ``(c X0 + d Y0, f Y0, 0)``.
    """
    branches = solve_parallelepiped_params(a, b, phi1, phi3, f)
    if not 0 <= branch < len(branches):
        raise InvalidInput("branch index out of range", branch=branch)
    c, d = branches[branch]
    A, B, _ = rank2_abc(a, b, c, d, f)
    identity = max(abs(a), abs(b), abs(c - 1), abs(d), abs(f - 1)) < 1e-12
    if A * A + B * B < 1e-14 and not identity:
        raise DegenerateClassParameters("A^2 + B^2 = 0: these parameters are a prism",
                                        suggestion=RANK2_PRISM)
    if abs(c) < 1e-9 or abs(f) < 1e-9:
        raise InfeasibleParameters("c or f vanishes: waypoint map is singular", c=c, f=f)
    n1, n3 = rank2_reference_normal(a, b, phi1), rank2_reference_normal(a, b, phi3)
    normals = [n1, -n1, n3, -n3]
    p1, p3 = (list(parallel_copies) + [0, 0])[:2]
    normals += [n1 if j % 2 == 0 else -n1 for j in range(p1)]
    normals += [n3 if j % 2 == 0 else -n3 for j in range(p3)]
    N0 = np.array(normals)
    q = _offsets(offsets, N0.shape[0])
    R0 = _points(waypoints0)
    if identity:
        return Configuration(N0, q, R0), Configuration(N0, q, R0)
    N = np.column_stack([c * N0[:, 0] + d * N0[:, 1], f * N0[:, 1], np.zeros(N0.shape[0])])
    z = R0[:, 2] if free_z is None else np.asarray(free_z, float).reshape(-1)
    R = _rank2_waypoints(R0, a, b, c, d, f, z)
    return Configuration(N0, q, R0), Configuration(N, q, R)


def prism_params(a, b, sign_choices=(1, 1, 1)):
    """(c, d, f) with A = B = C = 0.  Signs for c and f; d's sign must follow c's."""
    signs = tuple(sign_choices)
    if len(signs) == 2:
        sc, sf = signs
        sd = sc
    elif len(signs) == 3:
        sc, sd, sf = signs
    else:
        raise InvalidInput("sign_choices takes two or three +-1 entries")
    c = sc * np.sqrt(a * a + 1.0)
    d = a * b / c
    # d is forced by B = 0 (ab = cd), so a conflicting sign request is infeasible
    if a * b != 0 and np.sign(d) != sd * np.sign(a * b):
        raise InfeasibleParameters("sign of d is fixed by ab = cd", a=a, b=b, sign_c=sc)
    rad = b * b - a * a * b * b / (a * a + 1.0) + 1.0
    if rad < 0:
        raise InfeasibleParameters("negative radicand for f", a=a, b=b)
    f = sf * np.sqrt(rad)
    return float(c), float(d), float(f)


def prism_rotation(a, b, c, d, f):
    """Orthogonal R with R n0 = (cX+dY, fY, 0) on every normal orthogonal to (a, b, -1)."""
    s = a * a + b * b + 1.0
    r3 = np.array([(c * a + d * b) / s, f * b / s, -1.0 / np.sqrt(s)])
    base = np.array([[c, d, 0.0], [0.0, f, 0.0], [0.0, 0.0, 0.0]])
    return base - np.outer(r3, [a, b, -1.0])


def augmented_matrix(normals, offsets):
    """Rows (n_k, q_k); its rank is 2 exactly when all walls share one line."""
    return np.column_stack([np.asarray(normals, float), np.asarray(offsets, float)])


def gen_prism_pair(a, b, wall_azimuths, offsets, waypoints0, slide, sign_choices=(1, 1, 1),
                   align=True):
    """Walls parallel to the axis (a, b, -1); waypoints slide along it.

    With ``align`` the equivalent is expressed in the reference frame (rooms
    coincide); otherwise its walls are vertical.  Returns (reference,
    equivalent, rotation).
    """
    c, d, f = prism_params(a, b, sign_choices)
    phi = np.asarray(wall_azimuths, float).reshape(-1)
    N0 = np.array([rank2_reference_normal(a, b, p) for p in phi])
    q = _offsets(offsets, N0.shape[0])
    R0 = _points(waypoints0)
    sl = np.broadcast_to(np.asarray(slide, float), (R0.shape[0],))
    Rot = prism_rotation(a, b, c, d, f)
    N = np.column_stack([c * N0[:, 0] + d * N0[:, 1], f * N0[:, 1], np.zeros(N0.shape[0])])
    z = R0 @ Rot[2] + sl
    R = _rank2_waypoints(R0, a, b, c, d, f, z)
    if align:
        N, R = N @ Rot, R @ Rot
    return Configuration(N0, q, R0), Configuration(N, q, R), Rot


# -- rank 3: general upper-triangular maps --------------------------------------

def rank3_matrix(a, b, c, e, f, i):
    return np.array([[a, b, c], [0.0, e, f], [0.0, 0.0, i]])


def rank3_abc(phi0, T):
    """Per-azimuth coefficients of the quadratic in sin/cos(2 theta0).

    ``B`` here is the full coefficient of sin(2 theta0) in ``|T n0|^2 - 1``,
    twice ``a c cos(phi0) + (b c + e f) sin(phi0)``.
    """
    (a, b, c), (_, e, f), (_, _, i) = T
    cp, sp = np.cos(phi0), np.sin(phi0)
    C = c * c + f * f + i * i - 1.0
    A = a * a * cp * cp + (b * b + e * e) * sp * sp + 2 * a * b * sp * cp - C - 1.0
    B = 2.0 * (a * c * cp + (b * c + e * f) * sp)
    return A, B, C


def rank3_unit_residual(theta0, phi0, T):
    n0 = angles_to_normal(theta0, phi0)
    return float(np.sum((T @ n0) ** 2) - 1.0)


def _polish_theta(theta, phi0, T, steps=4):
    for _ in range(steps):
        n = angles_to_normal(theta, phi0)
        dn = np.array([np.cos(theta) * np.cos(phi0), np.cos(theta) * np.sin(phi0),
                       -np.sin(theta)])
        Tn = T @ n
        r = Tn @ Tn - 1.0
        g = 2.0 * Tn @ (T @ dn)
        if abs(g) < 1e-14 or abs(r) < 1e-16:
            break
        theta = theta - r / g
    return theta


def rank3_theta_roots(phi0, T, tol=VALID_TOL):
    """Valid inclinations for azimuth ``phi0``: [t1, t1 + pi, t3, t3 + pi].

    Candidates come from cos(2 theta0) = x1 or x2; each is Newton-polished and
    kept only if ``|T n0| = 1`` holds within ``tol``.  Returns None when every
    inclination is valid (the quadratic vanishes identically).
    """
    A, B, C = rank3_abc(phi0, T)
    den = A * A + B * B
    if den < 1e-20:
        return None if abs(C) < 1e-12 else []
    disc = B * B - 4 * A * C - 4 * C * C
    if disc < -1e-12:
        return []
    root = B * np.sqrt(max(disc, 0.0))
    primaries = []
    for x in ((A * (A + 2 * C) + root) / den, (A * (A + 2 * C) - root) / den):
        if abs(x) > 1 + 1e-9:
            continue
        h = 0.5 * np.arccos(np.clip(x, -1, 1))
        for cand in (h, -h, h + np.pi, np.pi - h):
            t = _polish_theta(float(cand), phi0, T)
            if abs(rank3_unit_residual(t, phi0, T)) > tol:
                continue
            t = float(np.mod(t, np.pi))
            if all(abs(np.angle(np.exp(2j * (t - p)))) > 1e-8 for p in primaries):
                primaries.append(t)
    roots = []
    for p in primaries[:2]:
        roots += [p, p + np.pi]
    return roots


def rank3_equivalent_angles(theta0, phi0, T, t_sign=1):
    """Equivalent (theta, phi): theta = t acos(i cos theta0), phi = atan(.) + s pi.

    ``s`` is found by substitution: the one reproducing ``T n0``.
    """
    target = T @ angles_to_normal(theta0, phi0)
    i = T[2, 2]
    theta = t_sign * np.arccos(np.clip(i * np.cos(theta0), -1, 1))
    num = target[1]
    den = target[0]
    base = np.pi / 2 if abs(den) < 1e-300 else np.arctan(num / den)
    best = None
    for s in (0, 1):
        phi = base + s * np.pi
        err = np.max(np.abs(angles_to_normal(theta, phi) - target))
        if best is None or err < best[0]:
            best = (err, float(theta), float(np.mod(phi, 2 * np.pi)), s)
    return best[1], best[2], best[3], best[0]


def _default_branches(alpha):
    return {1: (0,), 2: (0, 1), 3: (0, 1, 2), 4: (0, 1, 2, 3)}[alpha]


def rank3_reference_normals(alpha, azimuths, T, branch_choices=None, inclinations=None):
    if alpha not in (1, 2, 3, 4):
        raise InvalidInput("alpha must be 1, 2, 3 or 4", alpha=alpha)
    phis = np.asarray(azimuths, float).reshape(-1)
    normals, thetas = [], []
    for k, phi in enumerate(phis):
        choice = _default_branches(alpha) if branch_choices is None else tuple(branch_choices[k])
        if len(choice) != alpha or len(set(choice)) != alpha:
            raise InvalidInput("branch_choices must name alpha distinct roots per azimuth",
                               index=k)
        roots = rank3_theta_roots(phi, T)
        if roots is None:
            base = np.pi / 2 if inclinations is None else float(inclinations[k])
            roots = [base, base + np.pi, np.pi - base, 2 * np.pi - base]
        if len(roots) <= max(choice):
            raise InfeasibleParameters("no valid inclination for this azimuth", index=k,
                                       phi=phi, equation="rank-3 unit norm")
        for j in choice:
            thetas.append((roots[j], phi))
            normals.append(angles_to_normal(roots[j], phi))
    return np.array(normals), thetas


def rank3_equivalent(reference, T):
    """Equivalent of ``reference`` under T: normals T n0, waypoints T^{-T} r0."""
    T = np.asarray(T, float)
    N = reference.normals @ T.T
    bad = np.flatnonzero(np.abs(np.linalg.norm(N, axis=1) - 1.0) > 1e-9)
    if bad.size:
        raise InfeasibleParameters("T does not keep these normals unit", index=int(bad[0]))
    N = N / np.linalg.norm(N, axis=1, keepdims=True)
    R = np.linalg.solve(T.T, reference.waypoints.T).T
    return Configuration(N, reference.offsets, R)


def gen_rank3_pair(alpha, azimuths, T_params, offsets, waypoints0, branch_choices=None,
                   inclinations=None):
    """Reference walls from the admissible inclinations of each azimuth, mapped by T."""
    T = rank3_matrix(*T_params)
    if abs(np.linalg.det(T)) < 1e-9:
        raise InfeasibleParameters("T is singular")
    N0, _ = rank3_reference_normals(alpha, azimuths, T, branch_choices, inclinations)
    q = _offsets(offsets, N0.shape[0])
    reference = Configuration(N0, q, _points(waypoints0))
    return reference, rank3_equivalent(reference, T)


def rank3_family_matrix(normals0, weights, kernel=None):
    """Upper-triangular T with T^T T = I + sum w_j Z_j over the unit-norm kernel."""
    if kernel is None:
        kernel, _ = gram.unit_norm_kernel(normals0)
    weights = np.asarray(weights, float).reshape(-1)
    if weights.size != len(kernel):
        raise InvalidInput("one weight per kernel direction is required",
                           kernel_dim=len(kernel))
    S = np.eye(3) + sum((w * Z for w, Z in zip(weights, kernel)), np.zeros((3, 3)))
    if np.min(np.linalg.eigvalsh(S)) <= 1e-12:
        raise InfeasibleParameters("weights leave T^T T indefinite")
    return gram.upper_factor(S)


def solve_rank3_params(normals0, fixed, restarts=16, seed=0, tol=1e-10):
    """Solve ``|T n0_k| = 1`` for the T entries not in ``fixed`` (multi-start LSQ).

    Sign-diagonal T (pure reflections) are rejected.  Raises
    OverconstrainedClass when K >= 6 walls leave no admissible T, otherwise
    InfeasibleParameters.
    """
    N0 = walls_to_normals(normals0)
    unknown = [n for n in RANK3_NAMES if n not in fixed]
    bad = [n for n in fixed if n not in RANK3_NAMES]
    if bad:
        raise InvalidInput("unknown T entry", names=bad)

    def build(x):
        p = dict(fixed)
        p.update(zip(unknown, x))
        return rank3_matrix(*(p[n] for n in RANK3_NAMES))

    def resid(x):
        T = build(x)
        return np.sum((N0 @ T.T) ** 2, axis=1) - 1.0

    rng = np.random.default_rng(seed)
    identity = dict(zip(RANK3_NAMES, (1.0, 0.0, 0.0, 1.0, 0.0, 1.0)))
    best = None
    for r in range(restarts):
        x0 = np.array([identity[n] for n in unknown]) + 0.5 * rng.standard_normal(len(unknown))
        sol = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        T = build(sol.x)
        err = float(np.max(np.abs(resid(sol.x))))
        trivial = np.allclose(np.abs(T), np.eye(3), atol=1e-6)
        if err <= tol and not trivial and abs(np.linalg.det(T)) > 1e-9:
            p = dict(fixed)
            p.update(zip(unknown, map(float, sol.x)))
            return {n: float(p[n]) for n in RANK3_NAMES}
        if best is None or err < best:
            best = err
    cls = OverconstrainedClass if N0.shape[0] >= 6 else InfeasibleParameters
    raise cls("no admissible T for these walls", best_residual=best, restarts=restarts)


# -- rank 3: two sets of walls parallel to two lines ----------------------------

def two_sets_discriminant(a, b, e):
    return -a * a * e * e + a * a + b * b + e * e - 1.0


def two_sets_z(a, b, e):
    if a == 0 or e == 0:
        raise DegenerateClassParameters("a = 0 or e = 0 gives a planar trajectory",
                                        suggestion=RANK4_PLANAR_TRAJECTORY)
    if abs(a * a - 1.0) < 1e-12:
        raise InfeasibleParameters("a^2 = 1 leaves z undefined", a=a)
    disc = two_sets_discriminant(a, b, e)
    if disc < -1e-14:
        raise InfeasibleParameters("negative discriminant: no admissible azimuths",
                                   discriminant=disc)
    r = 2.0 * np.sqrt(max(disc, 0.0))
    return (2 * a * b + r) / (a * a - 1.0), (2 * a * b - r) / (a * a - 1.0)


def two_sets_azimuths(a, b, e):
    """{1: [phi, phi'], 2: [...]}: phi = 2 atan((z +- sqrt(z^2 + 4)) / 2) in [0, 2pi)."""
    out = {}
    for idx, z in zip((1, 2), two_sets_z(a, b, e)):
        r = np.sqrt(z * z + 4.0)
        out[idx] = [float(np.mod(2 * np.arctan((z + s * r) / 2.0), 2 * np.pi)) for s in (1, -1)]
    return out


def two_sets_unit_residual(phi, a, b, e):
    return (a * np.cos(phi) + b * np.sin(phi)) ** 2 + (e * np.sin(phi)) ** 2 - 1.0


def two_sets_params_for(phi1, phi2, a):
    """(b, e) keeping azimuths phi1, phi2 admissible for a new value of a.

    ``2 a b cos sin + (b^2 + e^2) sin^2 = 1 - a^2 cos^2`` is linear in
    (b, b^2 + e^2).
    """
    M, rhs = [], []
    for phi in (phi1, phi2):
        cp, sp = np.cos(phi), np.sin(phi)
        M.append([2 * a * cp * sp, sp * sp])
        rhs.append(1.0 - a * a * cp * cp)
    b, w = np.linalg.solve(np.array(M), rhs)
    if w - b * b <= 0:
        raise InfeasibleParameters("no real e for this a", a=a)
    return float(b), float(np.sqrt(w - b * b))


def gen_two_parallel_sets_pair(a, b, e, inclinations, set_assignment, offsets, waypoints0,
                               i=1.0, root_choices=None):
    """Walls in two groups, each parallel to a horizontal line, mapped by
    T = [[a, b, 0], [0, e, 0], [0, 0, i]] with i = +-1."""
    if i not in (1, -1, 1.0, -1.0):
        raise InvalidInput("i must be +1 or -1", i=i)
    az = two_sets_azimuths(a, b, e)
    thetas = np.asarray(inclinations, float).reshape(-1)
    K = thetas.size
    sets = list(set_assignment)
    if len(sets) != K or any(s not in (1, 2) for s in sets):
        raise InvalidInput("set_assignment must give 1 or 2 per wall")
    if root_choices is None:
        root_choices = [0] * K
    N0 = np.array([angles_to_normal(t, az[s][r]) for t, s, r in zip(thetas, sets, root_choices)])
    q = _offsets(offsets, K)
    reference = Configuration(N0, q, _points(waypoints0))
    return reference, rank3_equivalent(reference, rank3_matrix(a, b, 0.0, e, 0.0, float(i)))


# -- rank 4: planar trajectories ------------------------------------------------

def planar_trajectory_normals(normals0, T, roots):
    """Equivalent normals (Ga + d Z, Ge + h Z, Z) with Z from the quadratic.

    ``roots[k] = +-1`` picks the square-root branch for wall k.
    """
    (a, b, c, d), (e, f, g, h) = np.asarray(T, float)
    N0 = np.asarray(normals0, float)
    Ga = N0 @ [a, b, c]
    Ge = N0 @ [e, f, g]
    den = 1.0 + d * d + h * h
    G = (d * Ga + h * Ge) ** 2 - den * (Ga * Ga + Ge * Ge - 1.0)
    bad = np.flatnonzero(G < -1e-12)
    if bad.size:
        raise InfeasibleParameters("negative radicand G", index=int(bad[0]),
                                   equation="rank-4 angle map")
    Z = (-(d * Ga + h * Ge) + np.asarray(roots, float) * np.sqrt(np.maximum(G, 0.0))) / den
    return np.column_stack([Ga + d * Z, Ge + h * Z, Z])


def gen_planar_trajectory_pair(reference_walls, T_params, offsets, gammas, roots=None):
    """Arbitrary room; both trajectories lie in planes.

    ``gammas`` is (N, 2): r0 = -(g1 (a, b, c) + g2 (e, f, g)) and
    r = (-g1, -g2, d g1 + h g2).
    """
    a, b, c, d, e, f, g, h = map(float, T_params)
    N0 = walls_to_normals(reference_walls)
    K = N0.shape[0]
    if roots is None:
        roots = np.ones(K)
    T = np.array([[a, b, c, d], [e, f, g, h]])
    N = planar_trajectory_normals(N0, T, roots)
    gam = np.atleast_2d(np.asarray(gammas, float))
    if gam.shape[1] != 2:
        raise InvalidInput("gammas must be (g1, g2) pairs")
    R0 = -(np.outer(gam[:, 0], [a, b, c]) + np.outer(gam[:, 1], [e, f, g]))
    R = np.column_stack([-gam[:, 0], -gam[:, 1], d * gam[:, 0] + h * gam[:, 1]])
    q = _offsets(offsets, K)
    return Configuration(N0, q, R0), Configuration(N, q, R)


# -- rank 5: linear trajectories ------------------------------------------------

def linear_trajectory3d_inclinations(normals0, phi, T_params, signs):
    """theta = s acos(w / sqrt(h^2 + 1)) - atan(h), h = a cos phi + b sin phi."""
    a, b, c, d, e = map(float, T_params)
    N0 = np.asarray(normals0, float)
    phi = np.asarray(phi, float)
    h = a * np.cos(phi) + b * np.sin(phi)
    w = N0 @ [c, d, e]
    ratio = w / np.sqrt(h * h + 1.0)
    bad = np.flatnonzero(np.abs(ratio) > 1 + 1e-12)
    if bad.size:
        raise InfeasibleParameters("acos argument outside [-1, 1]", index=int(bad[0]),
                                   equation="rank-5 angle map")
    return np.asarray(signs, float) * np.arccos(np.clip(ratio, -1, 1)) - np.arctan(h)


def gen_linear_trajectory3d_pair(reference_walls, equivalent_azimuths, T_params, offsets,
                                 gammas=None, signs=None, waypoints0=None):
    """Arbitrary room; both trajectories on lines: r0 = g (-c, -d, -e), r = g (a, b, -1)."""
    a, b, c, d, e = map(float, T_params)
    N0 = walls_to_normals(reference_walls)
    K = N0.shape[0]
    phi = np.asarray(equivalent_azimuths, float).reshape(-1)
    if phi.size != K:
        raise InvalidInput("one equivalent azimuth per wall is required")
    if signs is None:
        signs = np.ones(K)
    theta = linear_trajectory3d_inclinations(N0, phi, T_params, signs)
    N = np.array([angles_to_normal(t, p) for t, p in zip(theta, phi)])
    direction0 = np.array([-c, -d, -e])
    if (gammas is None) == (waypoints0 is None):
        raise InvalidInput("pass exactly one of gammas or waypoints0")
    if gammas is not None:
        gam = np.asarray(gammas, float).reshape(-1)
    else:
        P = _points(waypoints0)
        dd = float(direction0 @ direction0)
        gam = P @ direction0 / dd if dd > 0 else np.zeros(P.shape[0])
        dev = np.max(np.linalg.norm(P - np.outer(gam, direction0), axis=1))
        if dd == 0 or dev > 1e-9 * max(1.0, float(np.max(np.abs(P)))):
            raise InvalidInput("reference trajectory is not on the admissible line",
                               direction=direction0)
    q = _offsets(offsets, K)
    return (Configuration(N0, q, np.outer(gam, direction0)),
            Configuration(N, q, np.outer(gam, [a, b, -1.0])))
