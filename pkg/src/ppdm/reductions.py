"""Alternative choices of independent columns and their reduction to the canonical systems.

Each ``*_to_canonical`` function maps the coefficients of an alternative
dependency system to the coefficients of the canonical one.  ``fit_dependency``
recovers such coefficients from an actual pair of rooms so the maps can be
checked on data.
"""

import numpy as np

from .errors import DegenerateClassParameters, InvalidInput
from .geometry import Configuration

QUARTER_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])


def fit_dependency(lhs, rhs):
    """Least-squares T with ``lhs_k = T rhs_k`` for every wall; returns (T, max residual)."""
    L = np.asarray(lhs, float)
    R = np.asarray(rhs, float)
    L = L.reshape(-1, 1) if L.ndim == 1 else L
    R = R.reshape(-1, 1) if R.ndim == 1 else R
    if L.shape[0] != R.shape[0]:
        raise InvalidInput("lhs and rhs need one row per wall")
    X, *_ = np.linalg.lstsq(R, L, rcond=None)
    return X.T, float(np.max(np.abs(R @ X - L)))


def _need(value, name):
    if abs(value) < 1e-12:
        raise DegenerateClassParameters(f"{name} = 0: reduction needs the other substitution",
                                        **{name: value})


# 2D rank 1: [cos p0, cos p, sin p] = [a, b, c] sin p0  (reference turned by pi/2)

def quarter_turn(config):
    """Rotate a 2D configuration by +pi/2."""
    Q = QUARTER_TURN
    return Configuration(config.normals @ Q.T, config.offsets, config.waypoints @ Q.T)


def alt_2d_rank1_to_canonical(a, b, c):
    """After turning the reference by pi/2, sin -> cos and cos -> -sin."""
    return -a, -b, -c


# 2D rank 2: [cos p, cos p0] = [[a, b], [c, d]] [sin p, sin p0]

def alt_2d_rank2_to_canonical(a, b, c, d):
    """T with [cos p, sin p] = T [cos p0, sin p0]."""
    _need(c, "c")
    return np.array([[a, b * c - a * d], [1.0, -d]]) / c


# 3D rank 2: [Z0, Y0, Y, Z] = [[a, b], [c, d], [e, f], [g, h]] [X0, X]

def alt_3d_rank2_to_canonical(a, b, c, d, e, f, g, h):
    """T with [Z0, X, Y, Z] = T [X0, Y0]."""
    _need(d, "d")
    return np.array([[a * d - b * c, b], [-c, 1.0], [e * d - c * f, f],
                     [g * d - c * h, h]]) / d


# 3D rank 3: [X, Y, Z0] = [[a, b, c], [d, e, f], [g, h, i]] [X0, Y0, Z]

def alt_3d_rank3_to_canonical(a, b, c, d, e, f, g, h, i):
    """T with [X, Y, Z] = T [X0, Y0, Z0]."""
    _need(i, "i")
    return np.array([[a * i - c * g, b * i - c * h, c], [d * i - f * g, e * i - f * h, f],
                     [-g, -h, 1.0]]) / i


# 3D rank 4: [X, X0] = [[a, b, c, d], [e, f, g, h]] [Y, Y0, Z0, Z]

def alt_3d_rank4_to_canonical(a, b, c, d, e, f, g, h):
    """T with [X, Y] = T [X0, Y0, Z0, Z]."""
    _need(e, "e")
    return np.array([[a, b * e - a * f, c * e - a * g, d * e - a * h],
                     [1.0, -f, -g, -h]]) / e


def triangularize(T):
    """T = Q U with Q orthogonal and U upper triangular with non-negative diagonal.

    Works on the square top block's columns; for a tall T (3 x 2) U is 2 x 2
    padded with zero rows.
    """
    T = np.asarray(T, float)
    Q, U = np.linalg.qr(T, mode="complete")
    s = np.sign(np.diag(U))
    s[s == 0] = 1.0
    D = np.ones(Q.shape[0])
    D[:s.size] = s
    return Q * D, U * D[:, None]


def sign_normalized(U):
    """Flip rows of an upper-triangular matrix so its diagonal is non-negative."""
    U = np.array(U, float)
    for k in range(min(U.shape)):
        if U[k, k] < 0:
            U[k] = -U[k]
    return U
