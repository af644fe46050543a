"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are collected in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import filecmp
import functools
import tempfile
import time
from pathlib import Path

import numpy as np

from ppdm import classes2d as c2
from ppdm import classes3d as c3
from ppdm import reductions as rd
from ppdm.errors import AmbiguousOrDegenerate, DegenerateTrajectoryOrRoom, PPDMError
from ppdm.figures import FIGURE_IDS, ROOM_CONGRUENT, figure_data, write_figure
from ppdm.geometry import (compute_ppdm, congruence_residual, lemma1_residual,
                           room_congruence_residual)
from ppdm.reconstruct import reconstruct_configuration
from ppdm.sampling import CLASS_IDS, CLASS_SPECS, draw_pair, generic_configuration, rng_for
from ppdm.uniqueness import AMBIGUOUS, UNIQUE, classify

SEED = 12345
DRAWS = 100
RESULTS = []


def report(label, ok, detail, started):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail} ({time.perf_counter() - started:.1f}s)"
    RESULTS.append(line)
    print(line)
    assert ok, line


@functools.lru_cache(maxsize=None)
def pairs(class_id):
    return [draw_pair(class_id, SEED, i) for i in range(DRAWS)]


def test_c1_generator_soundness():
    t0 = time.perf_counter()
    worst_d = worst_l = 0.0
    for cid in CLASS_IDS:
        for ref, eq, _, _ in pairs(cid):
            r = max(ref.bounding_radius(), eq.bounding_radius())
            worst_d = max(worst_d, np.max(np.abs(compute_ppdm(ref) - compute_ppdm(eq))) / r)
            worst_l = max(worst_l, *lemma1_residual(ref, eq))
    report("C1 generator soundness", worst_d <= 1e-9 and worst_l <= 1e-9,
           f"{len(CLASS_IDS)} classes x {DRAWS} draws, max PPDM diff/radius {worst_d:.1e}, "
           f"max lemma1 {worst_l:.1e} (tol 1e-9)", t0)


def test_c2_genuine_ambiguity():
    t0 = time.perf_counter()
    min_cong, max_room, min_traj = np.inf, 0.0, np.inf
    for cid in CLASS_IDS:
        spec = CLASS_SPECS[cid]
        for ref, eq, _, _ in pairs(cid):
            cong = congruence_residual(ref, eq)
            if spec.room_congruent:
                max_room = max(max_room, room_congruence_residual(ref, eq))
                min_traj = min(min_traj, cong)
            else:
                min_cong = min(min_cong, cong)
    ok = min_cong >= 1e-3 and max_room <= 1e-9 and min_traj >= 1e-3
    report("C2 genuine ambiguity", ok,
           f"min congruence {min_cong:.2e} (>=1e-3); corridor/prism rooms {max_room:.1e} "
           f"(<=1e-9), trajectories {min_traj:.2e} (>=1e-3)", t0)


def test_c3_prism_rotation():
    t0 = time.perf_counter()
    worst = max(np.max(np.abs(x["rotation"].T @ x["rotation"] - np.eye(3)))
                for _, _, _, x in pairs(c3.RANK2_PRISM))
    report("C3 prism rotation factor", worst <= 1e-9,
           f"{DRAWS} draws, max |R^T R - I| {worst:.1e} (tol 1e-9)", t0)


def test_c4_classifier():
    t0 = time.perf_counter()
    wrong, total = [], 0
    for cid in CLASS_IDS:
        for i, (ref, eq, _, _) in enumerate(pairs(cid)):
            for cfg in (ref, eq):
                rep = classify(cfg)
                total += 1
                if rep.verdict != AMBIGUOUS or cid not in rep.class_ids:
                    wrong.append((cid, i))
    generic = 0
    for m, k_min in ((2, 5), (3, 6)):
        for i in range(500):
            rng = rng_for(SEED, 900 + m, i)
            cfg = generic_configuration(rng, m, int(rng.integers(k_min, k_min + 4)),
                                        int(rng.integers(m + 1, m + 6)))
            rep = classify(cfg)
            total += 1
            generic += 1
            if rep.verdict != UNIQUE:
                wrong.append((f"generic{m}d", i))
    report("C4 uniqueness classifier", not wrong and total >= 1200,
           f"{total} instances ({total - generic} generator, {generic} generic), "
           f"{len(wrong)} wrong", t0)


def test_c5_reconstruction():
    t0 = time.perf_counter()
    worst_c = worst_p = 0.0
    for i in range(1000):
        m = 2 if i % 2 == 0 else 3
        rng = rng_for(SEED, 500, i)
        k = int(rng.integers(4, 9)) if m == 2 else int(rng.integers(6, 11))
        cfg = generic_configuration(rng, m, k, int(rng.integers(m + 1, m + 7)))
        res = reconstruct_configuration(compute_ppdm(cfg), m)
        worst_c = max(worst_c, congruence_residual(cfg, res.configuration))
        worst_p = max(worst_p, res.ppdm_residual)
    errors_ok = True
    for i in range(20):
        rng = rng_for(SEED, 501, i)
        five = generic_configuration(rng, 3, 5, 6)
        flat = generic_configuration(rng, 3, 7, 6)
        flat = flat.with_waypoints(np.column_stack([flat.waypoints[:, :2], np.zeros(6)]))
        for cfg, err in ((five, AmbiguousOrDegenerate), (flat, DegenerateTrajectoryOrRoom)):
            try:
                reconstruct_configuration(compute_ppdm(cfg), 3)
                errors_ok = False
            except PPDMError as exc:
                errors_ok &= isinstance(exc, err) and "error" in exc.to_dict()
    ok = worst_c <= 1e-6 and worst_p <= 1e-8 and errors_ok
    report("C5 reconstruction round trip", ok,
           f"1000 configs, max congruence {worst_c:.1e} (<=1e-6), max PPDM {worst_p:.1e} "
           f"(<=1e-8); K=5 / coplanar errors {'ok' if errors_ok else 'WRONG'}", t0)


def _reduction_errors():
    """Per reduction: list of max deviations from the canonical generator."""
    out = {k: [] for k in ("2D rank-1", "2D rank-2", "3D rank-2", "3D rank-3", "3D rank-4")}
    for ref, eq, p, _ in pairs(c2.RANK1_CORRIDOR)[:30]:
        N0, N = ref.normals, eq.normals
        if np.min(np.abs(N0[:, 1])) < 1e-3:
            continue
        alt, _ = rd.fit_dependency(np.column_stack([N0[:, 0], N[:, 0], N[:, 1]]), N0[:, 1])
        M0 = rd.quarter_turn(ref).normals
        can, _ = rd.fit_dependency(np.column_stack([M0[:, 1], N[:, 0], N[:, 1]]), M0[:, 0])
        out["2D rank-1"].append(np.max(np.abs(
            np.asarray(rd.alt_2d_rank1_to_canonical(*alt.ravel())) - can.ravel())))
    for ref, eq, p, _ in pairs(c2.RANK2_PARALLELOGRAM)[:30]:
        Q = np.array([[np.cos(0.8), -np.sin(0.8)], [np.sin(0.8), np.cos(0.8)]])
        N0, N = ref.normals, eq.normals @ Q.T
        alt, _ = rd.fit_dependency(np.column_stack([N[:, 0], N0[:, 0]]),
                                   np.column_stack([N[:, 1], N0[:, 1]]))
        T = rd.alt_2d_rank2_to_canonical(*alt.ravel())
        a, b = c2.solve_parallelogram_params(p["phi1"], p["phi3"], p["d"])[p["branch"]]
        U = rd.triangularize(T)[1]
        out["2D rank-2"].append(max(np.max(np.abs(N0 @ T.T - N)),
                                    np.max(np.abs(U - rd.sign_normalized([[a, b], [0, p["d"]]])))))
    for ref, eq, p, _ in pairs(c3.RANK2_PARALLELEPIPED)[:30]:
        N0, N = ref.normals, eq.normals
        alt, _ = rd.fit_dependency(np.column_stack([N0[:, 2], N0[:, 1], N[:, 1], N[:, 2]]),
                                   np.column_stack([N0[:, 0], N[:, 0]]))
        c, d = c3.solve_parallelepiped_params(p["a"], p["b"], p["phi1"], p["phi3"],
                                              p["f"])[p["branch"]]
        T = rd.alt_3d_rank2_to_canonical(*alt.ravel())
        out["3D rank-2"].append(np.max(np.abs(T - c3.rank2_matrix(p["a"], p["b"], c, d, p["f"]))))
    for ref, eq, p, _ in pairs(c3.RANK3_MISC)[:30]:
        N0, N = ref.normals, eq.normals
        rhs = np.column_stack([N0[:, 0], N0[:, 1], N[:, 2]])
        if np.linalg.matrix_rank(rhs, tol=1e-8) < 3:
            continue
        alt, _ = rd.fit_dependency(np.column_stack([N[:, 0], N[:, 1], N0[:, 2]]), rhs)
        T = rd.alt_3d_rank3_to_canonical(*alt.ravel())
        want = c3.rank3_matrix(*(p["T"][n] for n in c3.RANK3_NAMES))
        out["3D rank-3"].append(np.max(np.abs(T - want)))
    for ref, eq, p, _ in pairs(c3.RANK4_PLANAR_TRAJECTORY)[:60]:
        N0, N = ref.normals, eq.normals
        rhs = np.column_stack([N[:, 1], N0[:, 1], N0[:, 2], N[:, 2]])
        if np.linalg.matrix_rank(rhs, tol=1e-8) < 4:
            continue
        alt, _ = rd.fit_dependency(np.column_stack([N[:, 0], N0[:, 0]]), rhs)
        T = rd.alt_3d_rank4_to_canonical(*alt.ravel())
        out["3D rank-4"].append(np.max(np.abs(T - np.reshape(p["T"], (2, 4)))))
    return out


def test_c6_reductions():
    t0 = time.perf_counter()
    errs = _reduction_errors()
    ok = all(len(v) >= 10 and max(v) <= 1e-9 for v in errs.values())
    detail = ", ".join(f"{k} n={len(v)} max {max(v):.1e}" for k, v in errs.items())
    report("C6 alternative-column reductions", ok, detail + " (tol 1e-9)", t0)


def test_c7_figures():
    t0 = time.perf_counter()
    bad = []
    for f in FIGURE_IDS:
        data, _ = figure_data(f)
        pairs_ok = all(p["verdict"] == "EqualPPDM-Distinct"
                       and p["room_congruent"] == (f in ROOM_CONGRUENT) for p in data["pairwise"])
        if not (data["verified"] and pairs_ok):
            bad.append(f)
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp, "a"), Path(tmp, "b")
        for f in FIGURE_IDS:
            write_figure(f, a)
            write_figure(f, b)
        names = sorted(p.name for p in a.iterdir())
        _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    ok = not bad and not mismatch and not errors
    report("C7 figure reproduction", ok,
           f"figures {FIGURE_IDS[0]}-{FIGURE_IDS[-1]} verified (failing: {bad or 'none'}), "
           f"{len(names)} files byte-identical across runs: {not mismatch and not errors}", t0)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
