"""Seeded parameter draws for every class, plus generic (uniquely determined) configurations.

Randomness is splittable: stream ``(class index, draw index)`` of a 64-bit
seed is ``SeedSequence(seed, spawn_key=...)``, so any single draw can be
reproduced without replaying the others.  Parameters are plain JSON-ready
dicts; ``build`` turns a dict into a configuration pair.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import classes2d as c2
from . import classes3d as c3
from .errors import InfeasibleParameters, InvalidInput, PPDMError
from .geometry import Configuration

MAX_TRIES = 200


def rng_for(seed, *stream):
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=stream))


def _lst(x):
    return np.asarray(x, float).tolist()


def _offsets(rng, k):
    return _lst(rng.uniform(0.5, 3.0, k))


def _cloud(rng, n, m, spread=0.6):
    return _lst(rng.normal(0.0, spread, (n, m)))


def _orth_gap(T):
    T = np.asarray(T, float)
    return float(np.linalg.norm(T.T @ T - np.eye(T.shape[1])))


# -- 2D --------------------------------------------------------------------------

def _sample_parallelogram(rng):
    for _ in range(MAX_TRIES):
        phi1 = rng.uniform(0, np.pi)
        phi3 = phi1 + rng.uniform(0.5, np.pi - 0.5)
        d = rng.uniform(0.4, 1.6) * rng.choice([-1, 1])
        try:
            branches = c2.solve_parallelogram_params(phi1, phi3, d)
        except InfeasibleParameters:
            continue
        ok = [j for j, (a, b) in enumerate(branches)
              if abs(a) > 0.2 and _orth_gap([[a, b], [0, d]]) > 0.1]
        if not ok:
            continue
        extra = [int(v) for v in rng.integers(0, 3, 2)]
        return {"phi1": phi1, "phi3": phi3, "d": d, "branch": int(rng.choice(ok)),
                "extra_parallel_walls": extra, "offsets": _offsets(rng, 4 + sum(extra)),
                "waypoints": _cloud(rng, int(rng.integers(3, 7)), 2)}
    raise InfeasibleParameters("no feasible parallelogram draw")


def _build_parallelogram(p):
    return c2.gen_parallelogram_pair(p["phi1"], p["phi3"], p["d"], p["offsets"], p["waypoints"],
                                     tuple(p.get("extra_parallel_walls", (0, 0))),
                                     p.get("branch", 0))


def _sample_corridor(rng):
    k = int(rng.integers(2, 6))
    n = int(rng.integers(2, 7))
    return {"a": float(rng.normal(0, 1.5)), "offsets": _offsets(rng, k),
            "waypoints0": _cloud(rng, n, 2), "free_coords": _lst(rng.normal(0, 0.6, n)),
            "sides": [k_ % 2 for k_ in range(k)]}


def _build_corridor(p):
    return c2.gen_corridor_pair(p["a"], p["offsets"], p["waypoints0"], p["free_coords"],
                                p.get("sides"))


def _sample_linear_2d(rng):
    for _ in range(MAX_TRIES):
        a, b, c = rng.normal(0, 0.8, 3)
        if abs(np.hypot(b, c) - np.hypot(1.0, a)) < 0.1:
            continue
        k = int(rng.integers(3, 7))
        bound = np.sqrt(a * a + 1)
        phis = []
        for _ in range(50 * k):
            phi = rng.uniform(0, 2 * np.pi)
            if abs(b * np.cos(phi) + c * np.sin(phi)) <= 0.98 * bound:
                phis.append(phi)
            if len(phis) == k:
                break
        if len(phis) < k:
            continue
        n = int(rng.integers(2, 7))
        return {"wall_angles": phis, "a": float(a), "b": float(b), "c": float(c),
                "offsets": _offsets(rng, k), "gammas": _lst(rng.normal(0, 1.0, n)),
                "signs": _lst(rng.choice([-1, 1], k))}
    raise InfeasibleParameters("no feasible linear-trajectory draw")


def _build_linear_2d(p):
    return c2.gen_linear_trajectory_pair_2d(p["wall_angles"], p["a"], p["b"], p["c"],
                                            p["offsets"], gammas=p.get("gammas"),
                                            signs=p.get("signs"),
                                            waypoints0=p.get("waypoints0"))


# -- 3D --------------------------------------------------------------------------

def _sample_corridor3d(rng):
    k = int(rng.integers(2, 5))
    n = int(rng.integers(2, 7))
    return {"a": float(rng.normal(0, 1.2)), "b": float(rng.normal(0, 1.2)),
            "offsets": _offsets(rng, k), "waypoints0": _cloud(rng, n, 3),
            "free_yz": _cloud(rng, n, 2), "choices": [[k_ % 2, 0] for k_ in range(k)]}


def _build_corridor3d(p):
    return c3.gen_corridor3d_pair(p["a"], p["b"], p["offsets"], p["waypoints0"], p["free_yz"],
                                  p.get("choices"))


def _sample_parallelepiped(rng):
    for _ in range(MAX_TRIES):
        phi1 = rng.uniform(0, np.pi)
        phi3 = phi1 + rng.uniform(0.5, np.pi - 0.5)
        a, b = rng.normal(0, 0.5, 2)
        f = rng.uniform(0.4, 1.6) * rng.choice([-1, 1])
        try:
            branches = c3.solve_parallelepiped_params(a, b, phi1, phi3, f)
        except InfeasibleParameters:
            continue
        ok = []
        for j, (c, d) in enumerate(branches):
            A, B, _ = c3.rank2_abc(a, b, c, d, f)
            if abs(c) > 0.2 and A * A + B * B > 1e-3:
                ok.append(j)
        if not ok:
            continue
        extra = [int(v) for v in rng.integers(0, 3, 2)]
        n = int(rng.integers(4, 8))
        return {"phi1": phi1, "phi3": phi3, "f": f, "a": float(a), "b": float(b),
                "branch": int(rng.choice(ok)), "parallel_copies": extra,
                "offsets": _offsets(rng, 4 + sum(extra)), "waypoints0": _cloud(rng, n, 3),
                "free_z": _lst(rng.normal(0, 0.6, n))}
    raise InfeasibleParameters("no feasible parallelepiped draw")


def _build_parallelepiped(p):
    return c3.gen_parallelepiped_pair(p["phi1"], p["phi3"], p["f"], p["offsets"], p["waypoints0"],
                                      a=p.get("a", 0.0), b=p.get("b", 0.0),
                                      parallel_copies=tuple(p.get("parallel_copies", (0, 0))),
                                      branch=p.get("branch", 0), free_z=p.get("free_z"))


def _sample_prism(rng):
    k = int(rng.integers(3, 7))
    n = int(rng.integers(4, 8))
    az = np.sort(rng.uniform(0, 2 * np.pi, k))
    return {"a": float(rng.normal(0, 0.8)), "b": float(rng.normal(0, 0.8)),
            "wall_azimuths": _lst(az), "offsets": _offsets(rng, k),
            "waypoints0": _cloud(rng, n, 3), "slide": _lst(rng.normal(0, 0.6, n)),
            "sign_choices": [int(rng.choice([-1, 1])), int(rng.choice([-1, 1]))], "align": True}


def _build_prism(p):
    ref, eq, rot = c3.gen_prism_pair(p["a"], p["b"], p["wall_azimuths"], p["offsets"],
                                     p["waypoints0"], p["slide"],
                                     tuple(p.get("sign_choices", (1, 1, 1))), p.get("align", True))
    return ref, eq, {"rotation": rot}


def _rank3_T(rng):
    for _ in range(MAX_TRIES):
        P = rng.normal(0, 1, (3, 3))
        P = P + P.T
        lam = np.linalg.eigvalsh(P)
        if lam[0] > -0.3 or lam[-1] < 0.3:
            continue
        P = P * rng.uniform(0.3, 0.7) / np.max(np.abs(lam))
        S = np.eye(3) + P
        return c3.gram.upper_factor(S)
    raise InfeasibleParameters("no indefinite perturbation drawn")


def _sample_rank3(rng):
    for _ in range(MAX_TRIES):
        T = _rank3_T(rng)
        alpha = int(rng.integers(1, 5))
        need = 2 if alpha <= 2 else 4
        k0 = int(rng.integers(3, 6))
        az = []
        for _ in range(60 * k0):
            phi = rng.uniform(0, 2 * np.pi)
            roots = c3.rank3_theta_roots(phi, T)
            if roots is not None and len(roots) >= need:
                az.append(phi)
            if len(az) == k0:
                break
        if len(az) < k0:
            continue
        n = int(rng.integers(4, 8))
        params = dict(zip(c3.RANK3_NAMES, (T[0, 0], T[0, 1], T[0, 2], T[1, 1], T[1, 2], T[2, 2])))
        return {"alpha": alpha, "azimuths": az, "T": {k: float(v) for k, v in params.items()},
                "offsets": _offsets(rng, alpha * k0), "waypoints0": _cloud(rng, n, 3)}
    raise InfeasibleParameters("no feasible rank-3 draw")


def _T6(p):
    T = p["T"]
    if isinstance(T, dict):
        return tuple(T[k] for k in c3.RANK3_NAMES)
    return tuple(T)


def _build_rank3(p):
    return c3.gen_rank3_pair(p["alpha"], p["azimuths"], _T6(p), p["offsets"], p["waypoints0"],
                             p.get("branch_choices"), p.get("inclinations"))


def _sample_two_sets(rng):
    for _ in range(MAX_TRIES):
        a = rng.uniform(0.3, 2.0) * rng.choice([-1, 1])
        e = rng.uniform(0.3, 2.0) * rng.choice([-1, 1])
        if abs(a * a - 1) < 0.15:
            continue
        b = rng.normal(0, 1.0)
        if c3.two_sets_discriminant(a, b, e) < 0.05:
            continue
        k1, k2 = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        sets = [1] * k1 + [2] * k2
        incl = rng.uniform(0.3, np.pi - 0.3, k1 + k2)
        n = int(rng.integers(4, 8))
        return {"a": float(a), "b": float(b), "e": float(e), "i": int(rng.choice([-1, 1])),
                "inclinations": _lst(incl), "set_assignment": sets,
                "root_choices": [int(v) for v in rng.integers(0, 2, k1 + k2)],
                "offsets": _offsets(rng, k1 + k2), "waypoints0": _cloud(rng, n, 3)}
    raise InfeasibleParameters("no feasible two-sets draw")


def _build_two_sets(p):
    return c3.gen_two_parallel_sets_pair(p["a"], p["b"], p["e"], p["inclinations"],
                                         p["set_assignment"], p["offsets"], p["waypoints0"],
                                         p.get("i", 1), p.get("root_choices"))


def _random_walls(rng, k):
    return np.column_stack([np.arccos(rng.uniform(-1, 1, k)), rng.uniform(0, 2 * np.pi, k)])


def _sample_planar(rng):
    for _ in range(MAX_TRIES):
        k = int(rng.integers(3, 9))
        walls = _random_walls(rng, k)
        N0 = c3.walls_to_normals(walls)
        T = np.array([[1, 0, 0, 0], [0, 1, 0, 0]], float) + rng.normal(0, 0.15, (2, 4))
        if np.linalg.norm(T - [[1, 0, 0, 0], [0, 1, 0, 0]]) < 0.1:
            continue
        roots = np.where(N0[:, 2] >= 0, 1.0, -1.0)
        try:
            c3.planar_trajectory_normals(N0, T, roots)
        except InfeasibleParameters:
            continue
        n = int(rng.integers(3, 8))
        return {"reference_walls": _lst(walls), "T": _lst(T.ravel()), "roots": _lst(roots),
                "offsets": _offsets(rng, k), "gammas": _cloud(rng, n, 2)}
    raise InfeasibleParameters("no feasible planar-trajectory draw")


def _build_planar(p):
    return c3.gen_planar_trajectory_pair(p["reference_walls"], p["T"], p["offsets"],
                                         p["gammas"], p.get("roots"))


def _sample_linear_3d(rng):
    for _ in range(MAX_TRIES):
        a, b = rng.normal(0, 0.4, 2)
        c, d, e = rng.normal(0, 0.6, 3)
        if abs(np.linalg.norm([c, d, e]) - np.linalg.norm([a, b, 1.0])) < 0.1:
            continue
        k = int(rng.integers(3, 9))
        walls = _random_walls(rng, k)
        N0 = c3.walls_to_normals(walls)
        w = N0 @ [c, d, e]
        phis = []
        for wk in w:
            for _ in range(100):
                phi = rng.uniform(0, 2 * np.pi)
                h = a * np.cos(phi) + b * np.sin(phi)
                if abs(wk) <= 0.98 * np.sqrt(1 + h * h):
                    phis.append(phi)
                    break
        if len(phis) < k:
            continue
        n = int(rng.integers(2, 7))
        return {"reference_walls": _lst(walls), "equivalent_azimuths": phis,
                "T": [float(v) for v in (a, b, c, d, e)], "offsets": _offsets(rng, k),
                "gammas": _lst(rng.normal(0, 1.0, n)), "signs": _lst(rng.choice([-1, 1], k))}
    raise InfeasibleParameters("no feasible linear-trajectory draw")


def _build_linear_3d(p):
    return c3.gen_linear_trajectory3d_pair(p["reference_walls"], p["equivalent_azimuths"], p["T"],
                                           p["offsets"], gammas=p.get("gammas"),
                                           signs=p.get("signs"), waypoints0=p.get("waypoints0"))


@dataclass(frozen=True)
class ClassSpec:
    class_id: str
    dimension: int
    sample: Callable
    builder: Callable
    room_congruent: bool = False

    def build(self, params):
        """(reference, equivalent, extras) from a parameter dict."""
        try:
            out = self.builder(params)
        except KeyError as exc:
            raise InvalidInput(f"missing parameter {exc.args[0]!r}", class_id=self.class_id)
        return out if len(out) == 3 else (out[0], out[1], {})


CLASS_SPECS = {s.class_id: s for s in (
    ClassSpec(c2.RANK1_CORRIDOR, 2, _sample_corridor, _build_corridor, True),
    ClassSpec(c2.RANK2_PARALLELOGRAM, 2, _sample_parallelogram, _build_parallelogram),
    ClassSpec(c2.RANK3_LINEAR_TRAJECTORY, 2, _sample_linear_2d, _build_linear_2d),
    ClassSpec(c3.RANK1_CORRIDOR_3D, 3, _sample_corridor3d, _build_corridor3d, True),
    ClassSpec(c3.RANK2_PARALLELEPIPED, 3, _sample_parallelepiped, _build_parallelepiped),
    ClassSpec(c3.RANK2_PRISM, 3, _sample_prism, _build_prism, True),
    ClassSpec(c3.RANK3_MISC, 3, _sample_rank3, _build_rank3),
    ClassSpec(c3.RANK3_TWO_PARALLEL_SETS, 3, _sample_two_sets, _build_two_sets),
    ClassSpec(c3.RANK4_PLANAR_TRAJECTORY, 3, _sample_planar, _build_planar),
    ClassSpec(c3.RANK5_LINEAR_TRAJECTORY, 3, _sample_linear_3d, _build_linear_3d),
)}
CLASS_IDS = tuple(CLASS_SPECS)


def sample_params(class_id, seed, index=0):
    if class_id not in CLASS_SPECS:
        raise InvalidInput("unknown class id", class_id=class_id, known=list(CLASS_IDS))
    return CLASS_SPECS[class_id].sample(rng_for(seed, CLASS_IDS.index(class_id), index))


def draw_pair(class_id, seed, index=0, overrides=None):
    """Seeded feasible pair; ``overrides`` replace sampled parameters before building.

    Returns (reference, equivalent, params, extras).
    """
    params = sample_params(class_id, seed, index)
    if overrides:
        params.update(overrides)
    ref, eq, extras = CLASS_SPECS[class_id].build(params)
    return ref, eq, params, extras


def generic_configuration(rng, m, k, n, spread=1.0):
    """Random walls in general position and an affinely full-rank trajectory."""
    for _ in range(MAX_TRIES):
        N = rng.normal(size=(k, m))
        N /= np.linalg.norm(N, axis=1, keepdims=True)
        G = np.abs(N @ N.T) - np.eye(k)
        if G.max() > 0.999:
            continue
        W = rng.normal(0.0, spread, (n, m))
        if np.linalg.svd(W - W.mean(0), compute_uv=False)[-1] < 0.05 * spread:
            continue
        return Configuration(N, rng.uniform(0.5, 3.0, k), W)
    raise PPDMError("no generic configuration drawn")
