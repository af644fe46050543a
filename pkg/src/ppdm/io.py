"""Configuration JSON and distance-matrix CSV."""

import csv
import io as _io
import json

import numpy as np

from .errors import InvalidInput
from .geometry import UNIT_TOL, Configuration


def config_to_dict(config):
    return {"dimension": config.dimension,
            "planes": [{"normal": n.tolist(), "offset": float(q)}
                       for n, q in zip(config.normals, config.offsets)],
            "waypoints": config.waypoints.tolist()}


def config_from_dict(data):
    try:
        m = int(data["dimension"])
        normals = np.array([p["normal"] for p in data["planes"]], float)
        offsets = np.array([p["offset"] for p in data["planes"]], float)
        waypoints = np.array(data["waypoints"], float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed configuration: {exc}")
    if normals.ndim != 2 or normals.shape[1] != m:
        raise InvalidInput("plane normals do not match the stated dimension", dimension=m)
    # hand-written files may drift in the last digits; only those rows are re-normalized,
    # so a file written by save_config loads back bit for bit
    norms = np.linalg.norm(normals, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise InvalidInput("plane normals must be unit length")
    drift = np.abs(norms - 1.0) > UNIT_TOL
    normals[drift] /= norms[drift, None]
    return Configuration(normals, offsets, waypoints)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_config(config, path):
    with open(path, "w") as fh:
        fh.write(dumps(config_to_dict(config)))


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read configuration {path}: {exc}")
    return config_from_dict(data)


def ppdm_to_csv(D):
    D = np.atleast_2d(np.asarray(D, float))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"wall_{k + 1}" for k in range(D.shape[1])])
    for row in D:
        w.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def save_ppdm(D, path):
    with open(path, "w") as fh:
        fh.write(ppdm_to_csv(D))


def load_ppdm(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInput(f"cannot read distance matrix {path}: {exc}")
    if rows and rows[0] and rows[0][0].startswith("wall_"):
        rows = rows[1:]
    try:
        D = np.array([[float(v) for v in r] for r in rows if r], float)
    except ValueError as exc:
        raise InvalidInput(f"non-numeric entry in {path}: {exc}")
    if D.ndim != 2 or D.size == 0:
        raise InvalidInput("distance matrix must be a non-empty rectangular table")
    return D
