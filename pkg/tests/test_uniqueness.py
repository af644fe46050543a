import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppdm import classes2d as c2
from ppdm import classes3d as c3
from ppdm.geometry import Configuration, apply_rigid_motion
from ppdm.sampling import CLASS_IDS, draw_pair, generic_configuration
from ppdm.uniqueness import (AMBIGUOUS, TOO_FEW_WALLS, UNIQUE, classify, normal_structure,
                             rank3_feasibility_search, rank3_feasibility_solve)

from conftest import random_motion

CUBE = np.vstack([np.eye(3), -np.eye(3)])
TRI3 = [[0.1, 0.2, 0.3], [1.0, 0.1, -0.2], [0.3, 1.1, 0.4], [-0.2, 0.5, 1.3]]


def test_normal_structure_examples():
    sq = normal_structure([[1, 0], [-1, 0], [0, 1], [0, -1]])
    assert sq.rank == 2 and sq.parallel_pairs == [(0, 1), (2, 3)]
    assert normal_structure([[1, 0], [-1, 0]]).rank == 1
    az = [0.1, 1.3, 2.9, 4.0]
    prism = normal_structure([[np.cos(p), np.sin(p), 0.0] for p in az])
    assert prism.rank == 2
    np.testing.assert_allclose(np.abs(prism.common_direction), [0, 0, 1], atol=1e-12)


def test_classify_2d_examples():
    sq = Configuration([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0],
                       [[0.1, 0.2], [0.7, 0.3], [0.4, 0.9]])
    rep = classify(sq)
    assert rep.verdict == AMBIGUOUS and rep.class_ids == [c2.RANK2_PARALLELOGRAM]
    az = np.array([0.1, 1.4, 2.5, 3.9, 5.2])
    pent = Configuration(np.column_stack([np.cos(az), np.sin(az)]), np.ones(5),
                         [[0.1, 0.2], [0.7, 0.3], [0.4, 0.9]])
    assert classify(pent).verdict == UNIQUE
    collinear = pent.with_waypoints([[0, 0], [1, 1], [2, 2]])
    assert classify(collinear).class_ids == [c2.RANK3_LINEAR_TRAJECTORY]


def test_classify_3d_too_few_walls(rng):
    N = rng.normal(size=(5, 3))
    N /= np.linalg.norm(N, axis=1, keepdims=True)
    rep = classify(Configuration(N, np.ones(5), TRI3))
    assert rep.verdict == AMBIGUOUS and TOO_FEW_WALLS in rep.class_ids


def test_cube_is_ambiguous():
    cube = Configuration(CUBE, np.ones(6), TRI3)
    rep = classify(cube)
    assert rep.verdict == AMBIGUOUS
    assert c3.RANK3_MISC in rep.class_ids
    assert rank3_feasibility_solve(cube) is not None


def test_generic_room_has_no_rank3_solution():
    rng = np.random.default_rng(5)
    cfg = generic_configuration(rng, 3, 6, 5)
    sol, ev = rank3_feasibility_search(cfg, restarts=32, force_search=True)
    assert sol is None
    assert ev["best_residual"] > 1e-3


def test_rank3_search_recovers_five_wall_generator():
    ref, _ = c3.gen_rank3_pair(1, [0.0, 1.5, 2.0, 3.0, 2.5], (1.1, 0.2, -0.3, 0.9, 0.25, 1.05),
                               np.ones(5), TRI3)
    sol, _ = rank3_feasibility_search(ref)
    assert sol is not None
    from ppdm.geometry import compute_ppdm
    assert np.max(np.abs(compute_ppdm(ref) - compute_ppdm(sol.equivalent))) <= 1e-6


@pytest.mark.parametrize("class_id", CLASS_IDS)
def test_generator_outputs_labeled(class_id):
    for index in range(3):
        ref, eq, _, _ = draw_pair(class_id, 99, index)
        for cfg in (ref, eq):
            rep = classify(cfg)
            assert rep.verdict == AMBIGUOUS
            assert class_id in rep.class_ids


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_classify_rigid_motion_invariant(seed, m):
    rng = np.random.default_rng(seed)
    cfg = generic_configuration(rng, m, 6 if m == 3 else 5, 5)
    moved = apply_rigid_motion(cfg, random_motion(rng, m))
    a, b = classify(cfg, restarts=4), classify(moved, restarts=4)
    assert a.verdict == b.verdict and a.class_ids == b.class_ids


@given(st.integers(0, 2**32 - 1))
def test_adding_generic_wall_never_makes_unique_ambiguous(seed):
    rng = np.random.default_rng(seed)
    cfg = generic_configuration(rng, 3, 6, 5)
    if classify(cfg, restarts=4).verdict != UNIQUE:
        return
    n = rng.normal(size=3)
    bigger = Configuration(np.vstack([cfg.normals, n / np.linalg.norm(n)]),
                           np.append(cfg.offsets, 1.0), cfg.waypoints)
    assert classify(bigger, restarts=4).verdict == UNIQUE


def test_report_serializes():
    import json
    rep = classify(Configuration(CUBE, np.ones(6), TRI3))
    json.dumps(rep.to_dict())
