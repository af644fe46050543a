"""Data behind the illustrated equivalence families (figure ids 3 to 13).

Every family is a list of configurations sharing one distance matrix.  The
exported data holds the configurations, wall segments (2D) or wall polygons
clipped to a cube (3D), and the pairwise verification reports.  Rendering is
optional and needs matplotlib.
"""

import os
from itertools import combinations

import numpy as np

from . import classes2d as c2
from . import classes3d as c3
from . import gram
from .errors import InvalidInput
from .geometry import Configuration, angles_to_normal, compute_ppdm
from .io import config_to_dict, dumps, ppdm_to_csv
from .sampling import rng_for
from .verification import EQUAL_DISTINCT, verify_pair

FIGURE_IDS = tuple(range(3, 14))


def _inside(rng, n, m, half):
    return rng.uniform(-half, half, (n, m))


def _fig3(rng):
    q = [2.0, 2.0, 1.5, 1.5]
    W = _inside(rng, 4, 2, 1.0)
    fam = [c2.gen_parallelogram_pair(0.0, np.pi / 2, d, q, W)[1] for d in (0.4, 0.6, 0.8)]
    return c2.RANK2_PARALLELOGRAM, fam, ["d=0.4", "d=0.6", "d=0.8"]


def _fig4(rng):
    W = _inside(rng, 4, 2, 1.0)
    out = [c2.gen_corridor_pair(0.5, [1.5, 1.5], W, rng.uniform(-2, 2, 4))[1] for _ in range(3)]
    return c2.RANK1_CORRIDOR, out, ["free y #1", "free y #2", "free y #3"]


def _fig5(rng):
    angles = 2 * np.pi * np.arange(5) / 5 + 0.1
    ref, eq = c2.gen_linear_trajectory_pair_2d(angles, 0.3, 0.9, 0.2, rng.uniform(1.5, 2.5, 5),
                                               gammas=[0.0, 1.0, 2.0])
    return c2.RANK3_LINEAR_TRAJECTORY, [ref, eq], ["reference", "equivalent"]


def _fig6(rng):
    W = _inside(rng, 4, 3, 1.0)
    out = [c3.gen_corridor3d_pair(0.5, 0.3, [1.5, 1.5], W, rng.uniform(-2, 2, (4, 2)))[1]
           for _ in range(3)]
    return c3.RANK1_CORRIDOR_3D, out, ["free yz #1", "free yz #2", "free yz #3"]


def _fig7(rng):
    W = _inside(rng, 5, 3, 0.8)
    q = [1.5, 1.5, 1.2, 1.2]
    z = rng.uniform(-1, 1, 5)
    fam = [c3.gen_parallelepiped_pair(0.3, 1.6, f, q, W, a=0.2, b=0.1, free_z=z)[1]
           for f in (0.7, 0.9)]
    return c3.RANK2_PARALLELEPIPED, fam, ["f=0.7", "f=0.9"]


def _fig8(rng):
    az = [0.2, 1.9, 3.4, 4.9]
    W = _inside(rng, 5, 3, 0.8)
    ref, eq, _ = c3.gen_prism_pair(0.4, -0.3, az, [1.5, 1.4, 1.6, 1.3], W, rng.uniform(-1, 1, 5))
    return c3.RANK2_PRISM, [ref, eq], ["reference", "slid"]


def _fig9(rng):
    a0, b0, e0 = 2.0, 2.0, 1.0
    az = c3.two_sets_azimuths(a0, b0, e0)
    p1, p2 = az[1][0], az[2][0]
    incl = [np.pi / 2, np.pi / 2, 0.25, np.pi / 2, np.pi / 2, np.pi - 0.25]
    phis = [p1, p1 + np.pi, p1, p2, p2 + np.pi, p2]
    N0 = np.array([angles_to_normal(t, p) for t, p in zip(incl, phis)])
    ref = Configuration(N0, [1.5, 1.5, 1.2, 1.5, 1.5, 1.2], _inside(rng, 5, 3, 0.6))
    fam = [ref]
    for a in (a0, 1.5):
        b, e = c3.two_sets_params_for(p1, p2, a)
        fam.append(c3.rank3_equivalent(ref, c3.rank3_matrix(a, b, 0.0, e, 0.0, 1.0)))
    return c3.RANK3_TWO_PARALLEL_SETS, fam, ["reference", "a=2", "a=1.5"]


def _fig10(rng):
    T = (1.1, 0.2, -0.3, 0.8, 0.25, 1.05)
    ref, eq = c3.gen_rank3_pair(2, [0.0, 1.5, 2.5], T, [1.5, 1.5, 1.3, 1.3, 1.4, 1.4],
                                _inside(rng, 5, 3, 0.6))
    return c3.RANK3_MISC, [ref, eq], ["reference", "equivalent"]


def _fig11(rng):
    walls = np.array([[1.2, 0.1], [1.4, 2.2], [1.6, 4.2], [0.3, 3.0], [2.8, 1.0]])
    N0 = c3.walls_to_normals(walls)
    ref = Configuration(N0, [1.5, 1.4, 1.6, 1.2, 1.3], _inside(rng, 5, 3, 0.6))
    (Z,), _ = gram.unit_norm_kernel(N0)
    Z = Z / np.max(np.abs(np.linalg.eigvalsh(Z)))
    fam, labels = [ref], ["reference"]
    for w in (0.3, -0.3):
        a = float(np.sqrt(1.0 + w * Z[0, 0]))
        p = c3.solve_rank3_params(N0, {"a": a}, seed=int(rng.integers(2**31)))
        fam.append(c3.rank3_equivalent(ref, c3.rank3_matrix(*(p[k] for k in c3.RANK3_NAMES))))
        labels.append(f"a={a:.4f}")
    return c3.RANK3_MISC, fam, labels


def _fig12(rng):
    walls = np.column_stack([rng.uniform(0.5, 2.6, 7), np.sort(rng.uniform(0, 2 * np.pi, 7))])
    N0 = c3.walls_to_normals(walls)
    T = (1.0, 0.1, 0.05, 0.15, -0.05, 0.9, 0.1, -0.1)
    g = np.array([(x, y) for x in (0.0, 0.5, 1.0) for y in (0.0, 0.5)])
    ref, eq = c3.gen_planar_trajectory_pair(walls, T, rng.uniform(1.2, 2.0, 7), g,
                                            roots=np.where(N0[:, 2] >= 0, 1.0, -1.0))
    return c3.RANK4_PLANAR_TRAJECTORY, [ref, eq], ["reference", "equivalent"]


def _fig13(rng):
    walls = np.column_stack([rng.uniform(0.5, 2.6, 6), np.sort(rng.uniform(0, 2 * np.pi, 6))])
    T = (0.2, -0.1, 0.3, 0.2, 0.5)
    phis = rng.uniform(0, 2 * np.pi, 6)
    ref, eq = c3.gen_linear_trajectory3d_pair(walls, phis, T, rng.uniform(1.2, 2.0, 6),
                                              gammas=[0.0, 1.0, 2.0])
    return c3.RANK5_LINEAR_TRAJECTORY, [ref, eq], ["reference", "equivalent"]


_BUILDERS = {3: _fig3, 4: _fig4, 5: _fig5, 6: _fig6, 7: _fig7, 8: _fig8, 9: _fig9,
             10: _fig10, 11: _fig11, 12: _fig12, 13: _fig13}
ROOM_CONGRUENT = {4, 6, 8}
TITLES = {3: "Parallelogram rooms", 4: "Three equivalent corridors (2D)",
          5: "Linear trajectories (2D)", 6: "Three equivalent corridors (3D)",
          7: "Hollow parallelepipeds", 8: "Hollow prisms", 9: "Two groups of walls",
          10: "Three pairs of parallel walls", 11: "Rooms with fewer than six walls",
          12: "Planar trajectories", 13: "Linear trajectories (3D)"}


def figure_family(fig_id, seed=0):
    """(class id, configurations, labels) for one figure."""
    if fig_id not in _BUILDERS:
        raise InvalidInput("unknown figure id", figure=fig_id, known=list(FIGURE_IDS))
    return _BUILDERS[fig_id](rng_for(seed, 100 + fig_id))


# -- geometry for plotting -----------------------------------------------------------

def wall_segment(normal, offset, half):
    """Intersection of the line <n, x> = q with the square [-half, half]^2, or None."""
    n = np.asarray(normal, float)
    p = offset * n
    t = np.array([-n[1], n[0]])
    lo, hi = -np.inf, np.inf
    for i in range(2):
        if abs(t[i]) < 1e-15:
            if abs(p[i]) > half:
                return None
            continue
        a, b = (-half - p[i]) / t[i], (half - p[i]) / t[i]
        lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
    if lo > hi:
        return None
    return [(p + lo * t).tolist(), (p + hi * t).tolist()]


def wall_polygon(normal, offset, half):
    """Vertices of the plane <n, x> = q inside the cube [-half, half]^3, in cyclic order."""
    n = np.asarray(normal, float)
    pts = []
    corners = np.array([[x, y, z] for x in (-half, half) for y in (-half, half)
                        for z in (-half, half)])
    for i, j in combinations(range(8), 2):
        A, B = corners[i], corners[j]
        if np.sum(A != B) != 1:
            continue
        fa, fb = A @ n - offset, B @ n - offset
        if fa * fb < 0 or (fa == 0 and fb != 0):
            pts.append(A + fa / (fa - fb) * (B - A))
    if len(pts) < 3:
        return []
    P = np.array(pts)
    c = P.mean(0)
    u = P[0] - c
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    ang = np.arctan2((P - c) @ v, (P - c) @ u)
    P = P[np.argsort(ang)]
    keep = [P[0]]
    for x in P[1:]:
        if np.linalg.norm(x - keep[-1]) > 1e-12:
            keep.append(x)
    return [x.tolist() for x in keep]


def _extent(family):
    return 1.5 * max(c.bounding_radius() for c in family)


def figure_data(fig_id, seed=0):
    class_id, family, labels = figure_family(fig_id, seed)
    half = _extent(family)
    configs = []
    for label, cfg in zip(labels, family):
        entry = {"label": label, "configuration": config_to_dict(cfg)}
        if cfg.dimension == 2:
            entry["wall_segments"] = [wall_segment(n, q, half)
                                      for n, q in zip(cfg.normals, cfg.offsets)]
        else:
            entry["wall_polygons"] = [wall_polygon(n, q, half)
                                      for n, q in zip(cfg.normals, cfg.offsets)]
        configs.append(entry)
    pairs = []
    for i, j in combinations(range(len(family)), 2):
        rep = verify_pair(family[i], family[j])
        pairs.append({"pair": [i, j], **rep.to_dict()})
    expected = EQUAL_DISTINCT
    ok = all(p["verdict"] == expected for p in pairs)
    if fig_id in ROOM_CONGRUENT:
        ok = ok and all(p["room_congruent"] for p in pairs)
    return {"figure": fig_id, "title": TITLES[fig_id], "class_id": class_id, "seed": seed,
            "extent": half, "expected_verdict": expected,
            "room_congruent_expected": fig_id in ROOM_CONGRUENT, "verified": ok,
            "configurations": configs, "pairwise": pairs}, family


def _waypoints_csv(labels, family):
    m = family[0].dimension
    lines = ["config,label,index," + ",".join("xyz"[:m])]
    for c, (label, cfg) in enumerate(zip(labels, family)):
        for i, r in enumerate(cfg.waypoints):
            lines.append(f"{c},{label},{i}," + ",".join(f"{v:.17g}" for v in r))
    return "\n".join(lines) + "\n"


def write_figure(fig_id, out_dir, seed=0, render=False):
    """Write figNN.json, figNN_ppdm.csv and figNN_waypoints.csv; returns the data dict."""
    data, family = figure_data(fig_id, seed)
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, f"fig{fig_id:02d}")
    with open(stem + ".json", "w") as fh:
        fh.write(dumps(data))
    with open(stem + "_ppdm.csv", "w") as fh:
        fh.write(ppdm_to_csv(compute_ppdm(family[0])))
    with open(stem + "_waypoints.csv", "w") as fh:
        fh.write(_waypoints_csv([c["label"] for c in data["configurations"]], family))
    if render:
        render_figure(data, stem + ".png")
    return data


def render_figure(data, path):
    """Draw one panel per configuration (needs matplotlib)."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        from mpl_toolkits.mplot3d.art3d import Poly3DCollection
    except ImportError as exc:
        raise InvalidInput("rendering needs matplotlib (pip install artifact[plot])") from exc
    confs = data["configurations"]
    m = confs[0]["configuration"]["dimension"]
    h = data["extent"]
    fig = plt.figure(figsize=(4 * len(confs), 4))
    for i, c in enumerate(confs):
        W = np.array(c["configuration"]["waypoints"])
        if m == 2:
            ax = fig.add_subplot(1, len(confs), i + 1)
            for seg in c["wall_segments"]:
                if seg:
                    s = np.array(seg)
                    ax.plot(s[:, 0], s[:, 1], "k-", lw=1.5)
            ax.plot(W[:, 0], W[:, 1], "o-", color="tab:red", ms=4)
            ax.set_xlim(-h, h)
            ax.set_ylim(-h, h)
            ax.set_aspect("equal")
        else:
            ax = fig.add_subplot(1, len(confs), i + 1, projection="3d")
            polys = [p for p in c["wall_polygons"] if p]
            ax.add_collection3d(Poly3DCollection(polys, alpha=0.25, facecolor="tab:blue",
                                                 edgecolor="k", linewidths=0.5))
            ax.plot(W[:, 0], W[:, 1], W[:, 2], "o-", color="tab:red", ms=3)
            for setter in (ax.set_xlim, ax.set_ylim, ax.set_zlim):
                setter(-h, h)
        ax.set_title(c["label"], fontsize=9)
    fig.suptitle(f"Fig. {data['figure']}: {data['title']}")
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
