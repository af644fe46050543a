import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ppdm import classes2d as c2
from ppdm.errors import DegenerateClassParameters, InfeasibleParameters, InvalidInput
from ppdm.geometry import compute_ppdm, congruence_residual, lemma1_residual, normal_to_angles
from ppdm.verification import EQUAL_DISTINCT, verify_pair

WP = [[0.2, 0.3], [0.5, -0.1], [-0.3, 0.4]]


def test_parallelogram_rectangle_example():
    branches = c2.solve_parallelogram_params(0.0, np.pi / 2, 0.6)
    assert any(np.allclose(ab, (1.0, 0.8)) for ab in branches)
    j = next(i for i, ab in enumerate(branches) if np.allclose(ab, (1.0, 0.8)))
    ref, eq = c2.gen_parallelogram_pair(0.0, np.pi / 2, 0.6, [1, 1, 1, 1], [[1.0, 1.4]], branch=j)
    got = sorted(normal_to_angles(n) for n in eq.normals)
    want = sorted(np.mod([0, np.pi, np.arctan(0.75), np.arctan(0.75) + np.pi], 2 * np.pi))
    np.testing.assert_allclose(got, want, atol=1e-12)
    np.testing.assert_allclose(eq.waypoints, [[1.0, 1.0]], atol=1e-12)
    assert ref.waypoints[0] @ ref.normals[2] == pytest.approx(1.4)
    np.testing.assert_allclose(compute_ppdm(ref), compute_ppdm(eq), atol=1e-12)


def test_parallelogram_branches_unit_residual():
    for ab in c2.solve_parallelogram_params(0.3, 1.9, 0.7):
        for phi in (0.3, 1.9, 0.3 + np.pi, 1.9 + np.pi):
            assert abs(c2.parallelogram_unit_residual(phi, *ab, 0.7)) < 1e-12


def test_parallelogram_reference_angles_oracle():
    # brute-force scan of the unit-norm condition as independent oracle
    a, b, d = 1.0, 0.8, 0.6
    roots = c2.parallelogram_reference_angles(a, b, d)
    grid = np.linspace(0, 2 * np.pi, 200001)
    f = c2.parallelogram_unit_residual(grid, a, b, d)
    sign_changes = grid[np.flatnonzero(np.diff(np.sign(f)) != 0)]
    assert len(roots) == len(sign_changes) >= 2
    for r in roots:
        assert np.min(np.abs(np.angle(np.exp(1j * (sign_changes - r))))) < 1e-4
        assert abs(c2.parallelogram_unit_residual(r, a, b, d)) < 1e-12


def test_parallelogram_identity():
    ref, eq = c2.gen_parallelogram_pair(0.0, np.pi / 2, 1.0, [1, 2, 1, 2], WP,
                                        branch=0)
    np.testing.assert_allclose(eq.normals, ref.normals)
    np.testing.assert_allclose(eq.waypoints, ref.waypoints)


def test_parallelogram_fig3_sweep():
    pairs = [c2.gen_parallelogram_pair(0.0, np.pi / 2, d, [1, 1, 1, 1], WP) for d in
             (0.4, 0.6, 0.8)]
    eqs = [p[1] for p in pairs]
    for i in range(3):
        for j in range(i + 1, 3):
            assert verify_pair(eqs[i], eqs[j]).verdict == EQUAL_DISTINCT


def test_parallelogram_infeasible():
    with pytest.raises(InfeasibleParameters):
        c2.solve_parallelogram_params(0.0, np.pi / 2, 1.5)
    with pytest.raises(InfeasibleParameters):
        c2.solve_parallelogram_params(0.0, np.pi, 0.5)
    with pytest.raises(InvalidInput):
        c2.gen_parallelogram_pair(0.0, np.pi / 2, 0.6, [1] * 4, WP, branch=9)


@given(st.floats(0, np.pi), st.floats(0.5, np.pi - 0.5), st.floats(0.3, 0.95),
       st.integers(0, 2), st.integers(0, 2))
def test_parallelogram_pairs_share_ppdm(phi1, gap, d, e1, e3):
    branches = c2.solve_parallelogram_params(phi1, phi1 + gap, d)
    for j in range(len(branches)):
        ref, eq = c2.gen_parallelogram_pair(phi1, phi1 + gap, d, np.ones(4 + e1 + e3), WP,
                                            (e1, e3), branch=j)
        r = max(ref.bounding_radius(), eq.bounding_radius())
        assert np.max(np.abs(compute_ppdm(ref) - compute_ppdm(eq))) <= 1e-9 * r
        assert max(lemma1_residual(ref, eq)) <= 1e-9


def test_corridor_sqrt2_example():
    ref, eq = c2.gen_corridor_pair(1.0, [1.0, 2.0], [[1.0, 1.0]], [5.0])
    np.testing.assert_allclose(eq.waypoints, [[np.sqrt(2), 5.0]])
    assert ref.waypoints[0] @ ref.normals[0] == pytest.approx(np.sqrt(2))
    assert eq.waypoints[0] @ eq.normals[0] == pytest.approx(np.sqrt(2))
    np.testing.assert_allclose(compute_ppdm(ref), compute_ppdm(eq), atol=1e-12)


def test_corridor_a0_slides():
    ref, eq = c2.gen_corridor_pair(0.0, [1, 1], WP, [7, 8, 9])
    np.testing.assert_allclose(eq.waypoints[:, 0], ref.waypoints[:, 0])
    np.testing.assert_allclose(eq.waypoints[:, 1], [7, 8, 9])


@given(st.floats(-3, 3), st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_corridor_property(a, free):
    ref, eq = c2.gen_corridor_pair(a, [1.0, 0.5, 2.0], WP, free, sides=[0, 1, 0])
    np.testing.assert_allclose(compute_ppdm(ref), compute_ppdm(eq), atol=1e-12)


def test_corridor_bad_input():
    with pytest.raises(InvalidInput):
        c2.gen_corridor_pair(0.5, [1.0], WP, [0, 0, 0])
    with pytest.raises(InvalidInput):
        c2.gen_corridor_pair(0.5, [1.0, 1.0], WP, [0, 0])


def test_linear_identity_parameters():
    phi0 = [0.2, 1.0, 2.0]
    ref, eq = c2.gen_linear_trajectory_pair_2d(phi0, 0.0, 1.0, 0.0, [1, 1, 1], gammas=[0, 1, 2])
    np.testing.assert_allclose(eq.normals, ref.normals, atol=1e-12)
    np.testing.assert_allclose(eq.waypoints, ref.waypoints, atol=1e-12)


def test_linear_b_c_zero():
    a = 0.7
    phi = c2.linear_trajectory_angles([0.1, 1.2, 2.5], a, 0.0, 0.0, [1, -1, 1])
    np.testing.assert_allclose(phi, np.array([1, -1, 1]) * np.pi / 2 - np.arctan(a))


def test_linear_pentagon_example():
    phi0 = np.linspace(0, 2 * np.pi, 6)[:-1] + 0.1
    ref, eq = c2.gen_linear_trajectory_pair_2d(phi0, 0.3, 0.9, 0.2, np.ones(5),
                                               gammas=[0, 1, 2])
    assert verify_pair(ref, eq).verdict == EQUAL_DISTINCT


def test_linear_rejects_off_line_waypoints():
    with pytest.raises(InvalidInput):
        c2.gen_linear_trajectory_pair_2d([0.1, 1.0], 0.3, 0.9, 0.2, [1, 1],
                                         waypoints0=[[0, 0], [1, 1]])
    with pytest.raises(InfeasibleParameters):
        c2.gen_linear_trajectory_pair_2d([0.0], 0.0, 3.0, 0.0, [1], gammas=[1])


@given(st.lists(st.floats(0, 2 * np.pi), min_size=2, max_size=6), st.floats(-1, 1),
       st.floats(-0.7, 0.7), st.floats(-0.7, 0.7))
def test_linear_property(phi0, a, b, c):
    assume(b * b + c * c <= 1 + a * a)
    k = len(phi0)
    ref, eq = c2.gen_linear_trajectory_pair_2d(phi0, a, b, c, np.ones(k), gammas=[-1, 0.5, 2])
    np.testing.assert_allclose(compute_ppdm(ref), compute_ppdm(eq), atol=1e-10)
