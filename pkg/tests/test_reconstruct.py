import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppdm import classes2d as c2
from ppdm.errors import AmbiguousOrDegenerate, DegenerateTrajectoryOrRoom, InvalidInput
from ppdm.geometry import Configuration, apply_rigid_motion, compute_ppdm, congruence_residual
from ppdm.gram import quadric_rows, smat, solve_unit_norm, svec, unit_norm_kernel, upper_factor
from ppdm.reconstruct import center_ppdm, metric_upgrade, reconstruct_configuration
from ppdm.sampling import generic_configuration

from conftest import random_motion

seeds = st.integers(0, 2**32 - 1)


def test_svec_round_trip(rng):
    A = rng.normal(size=(3, 3))
    S = A + A.T
    np.testing.assert_allclose(smat(svec(S)), S)
    n = rng.normal(size=3)
    assert quadric_rows(n[None]) @ svec(S) == pytest.approx(n @ S @ n)


def test_unit_norm_kernel_of_parallelogram():
    N = np.array([[1, 0], [-1, 0], [0.6, 0.8], [-0.6, -0.8]])
    kernel, _ = unit_norm_kernel(N)
    assert len(kernel) == 1
    for n in N:
        assert n @ kernel[0] @ n == pytest.approx(0, abs=1e-12)


def test_upper_factor():
    S = np.array([[2.0, 0.3, 0.1], [0.3, 1.5, -0.2], [0.1, -0.2, 1.1]])
    L = upper_factor(S)
    np.testing.assert_allclose(L.T @ L, S, atol=1e-14)
    assert np.allclose(L, np.triu(L))


def test_center_ppdm():
    D = np.arange(12.0).reshape(3, 4)
    C, q = center_ppdm(D)
    np.testing.assert_allclose(C[0], 0)
    np.testing.assert_allclose(q, D[0])
    with pytest.raises(InvalidInput):
        center_ppdm(D[:1])


def test_centered_rank_is_m():
    rng = np.random.default_rng(1)
    cfg = generic_configuration(rng, 3, 7, 6)
    C, _ = center_ppdm(compute_ppdm(cfg))
    s = np.linalg.svd(C, compute_uv=False)
    assert s[3] <= 1e-12 * s[0]
    rep = Configuration(cfg.normals, cfg.offsets, np.tile(cfg.waypoints[0], (6, 1)))
    assert np.max(np.abs(center_ppdm(compute_ppdm(rep))[0])) == 0


def test_corridor_centered_rank_one():
    ref, _ = c2.gen_corridor_pair(0.5, [1, 2, 3], [[0, 0], [1, 0.3], [0.2, 1]], [0, 0, 0])
    C, _ = center_ppdm(compute_ppdm(ref))
    s = np.linalg.svd(C, compute_uv=False)
    assert s[1] <= 1e-12 * s[0]
    with pytest.raises(DegenerateTrajectoryOrRoom):
        reconstruct_configuration(compute_ppdm(ref), 2)


def test_metric_upgrade_generic_3d():
    rng = np.random.default_rng(2)
    cfg = generic_configuration(rng, 3, 6, 4)
    C, _ = center_ppdm(compute_ppdm(cfg))
    X, N, S, info = metric_upgrade(C, 3)
    assert np.min(np.linalg.eigvalsh(S)) > 0
    assert info["unit_norm_residual"] <= 1e-9


def test_round_trip_3d():
    rng = np.random.default_rng(3)
    cfg = generic_configuration(rng, 3, 6, 8)
    res = reconstruct_configuration(compute_ppdm(cfg), 3)
    assert congruence_residual(cfg, res.configuration) <= 1e-6
    assert res.ppdm_residual <= 1e-8
    assert not res.ambiguous


@given(seeds, st.sampled_from([2, 3]))
def test_round_trip_property(seed, m):
    rng = np.random.default_rng(seed)
    cfg = generic_configuration(rng, m, int(rng.integers(4 if m == 2 else 6, 10)),
                                int(rng.integers(m + 1, 9)))
    res = reconstruct_configuration(compute_ppdm(cfg), m)
    assert res.ppdm_residual <= 1e-8
    assert congruence_residual(cfg, res.configuration) <= 1e-6 * cfg.bounding_radius()


@given(seeds)
def test_gauge_invariance(seed):
    rng = np.random.default_rng(seed)
    cfg = generic_configuration(rng, 3, 7, 5)
    moved = apply_rigid_motion(cfg, random_motion(rng, 3))
    a = reconstruct_configuration(compute_ppdm(cfg), 3).configuration
    b = reconstruct_configuration(compute_ppdm(moved), 3).configuration
    assert congruence_residual(a, b) <= 1e-6


def test_five_walls_underdetermined(rng):
    cfg = generic_configuration(rng, 3, 5, 6)
    with pytest.raises(AmbiguousOrDegenerate) as err:
        reconstruct_configuration(compute_ppdm(cfg), 3)
    assert err.value.to_dict()["error"] == "AmbiguousOrDegenerate"


def test_coplanar_trajectory(rng):
    cfg = generic_configuration(rng, 3, 7, 6)
    flat = cfg.with_waypoints(np.column_stack([rng.normal(size=(6, 2)), np.zeros(6)]))
    with pytest.raises(DegenerateTrajectoryOrRoom) as err:
        reconstruct_configuration(compute_ppdm(flat), 3)
    assert err.value.info["rank"] == 2


def test_zero_matrix_is_degenerate():
    with pytest.raises(DegenerateTrajectoryOrRoom):
        reconstruct_configuration(np.zeros((4, 4)), 3)


def test_parallelogram_input_matches_ppdm_only():
    ref, eq = c2.gen_parallelogram_pair(0.0, np.pi / 2, 0.6, [1, 1, 1, 1],
                                        [[0.2, 0.3], [0.5, -0.1], [-0.3, 0.4]])
    res = reconstruct_configuration(compute_ppdm(eq), 2)
    assert res.ambiguous
    assert res.ppdm_residual <= 1e-6


def test_rank_too_high():
    rng = np.random.default_rng(9)
    with pytest.raises(InvalidInput):
        reconstruct_configuration(rng.normal(size=(6, 6)), 2)


def test_solve_unit_norm_exact(rng):
    cfg = generic_configuration(rng, 3, 8, 4)
    S_true = np.array([[1.5, 0.2, 0.0], [0.2, 0.8, 0.1], [0.0, 0.1, 1.2]])
    L = upper_factor(S_true)
    Q = cfg.normals @ np.linalg.inv(L).T
    S, rank, res = solve_unit_norm(Q)
    np.testing.assert_allclose(S, S_true, atol=1e-10)
    assert rank == 6
