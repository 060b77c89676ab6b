import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reradmimo import errors
from reradmimo.geometry import (
    TWO_PI,
    ArrayPose,
    build_square_array,
    link_arrays,
    pairwise_distances,
    random_pose,
    rotation_matrix,
    warn_if_near_field,
)
from reradmimo.linkbudget import CONST

angles = st.floats(0.0, TWO_PI, exclude_max=True)


@pytest.mark.example
def test_single_element_sits_at_center():
    arr = build_square_array(1, 1e-3, ArrayPose((1.0, 2.0, 3.0)))
    np.testing.assert_array_equal(arr.element_positions, [[1.0, 2.0, 3.0]])


@pytest.mark.example
def test_four_elements_form_square_corners():
    s = 2e-3
    arr = build_square_array(4, s)
    got = {tuple(np.round(p / (s / 2), 12)) for p in arr.element_positions}
    assert got == {(0.0, y, z) for y in (-1.0, 1.0) for z in (-1.0, 1.0)}


@pytest.mark.example
def test_64_element_diagonal_at_60ghz():
    s = CONST.c / 60e9 / 2
    assert s == pytest.approx(2.498e-3, abs=1e-6)
    arr = build_square_array(64, s)
    pos = arr.element_positions
    span = np.max(np.linalg.norm(pos[:, None] - pos[None], axis=-1))
    assert span == pytest.approx(7 * s * math.sqrt(2), rel=1e-12)
    assert arr.diagonal == pytest.approx(24.73e-3, abs=0.01e-3)


@pytest.mark.parametrize("n", [0, 2, 8, 63])
def test_non_square_count_rejected(n):
    with pytest.raises(errors.NotPerfectSquare):
        build_square_array(n, 1e-3)


def test_non_positive_spacing_rejected():
    with pytest.raises(errors.NonPositiveSpacing):
        build_square_array(4, 0.0)


def test_pose_angles_validated():
    with pytest.raises(ValueError):
        ArrayPose(orientation=(TWO_PI, 0.0, 0.0))
    with pytest.raises(ValueError):
        ArrayPose(orientation=(-0.1, 0.0, 0.0))


@given(yaw=angles, pitch=angles, roll=angles)
def test_rotation_is_orthonormal(yaw, pitch, roll):
    r = rotation_matrix(yaw, pitch, roll)
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)


def test_rotation_order_is_z_then_y_then_x():
    # intrinsic Z-Y-X: the yaw-only rotation maps x to y
    np.testing.assert_allclose(rotation_matrix(math.pi / 2, 0, 0) @ [1, 0, 0], [0, 1, 0], atol=1e-15)
    r = rotation_matrix(0.3, 0.5, 0.7)
    np.testing.assert_allclose(r, rotation_matrix(0.3, 0, 0) @ rotation_matrix(0, 0.5, 0) @ rotation_matrix(0, 0, 0.7))


@settings(max_examples=30)
@given(n=st.sampled_from([1, 4, 9, 16]), yaw=angles, pitch=angles, roll=angles)
def test_rotation_preserves_element_spacing(n, yaw, pitch, roll):
    s = 1.5e-3
    base = build_square_array(n, s).element_positions
    rot = build_square_array(n, s, ArrayPose((5.0, 0.0, 0.0), (yaw, pitch, roll))).element_positions
    d0 = np.linalg.norm(base[:, None] - base[None], axis=-1)
    d1 = np.linalg.norm(rot[:, None] - rot[None], axis=-1)
    np.testing.assert_allclose(d0, d1, atol=1e-15)
    np.testing.assert_allclose(rot.mean(axis=0), [5.0, 0.0, 0.0], atol=1e-12)


@pytest.mark.example
def test_single_elements_ten_metres_apart():
    tx, rx = link_arrays(1, 1, 1e-3, 10.0)
    np.testing.assert_array_equal(pairwise_distances(tx, rx), [[10.0]])


@pytest.mark.example
def test_swapping_ends_transposes():
    tx, rx = link_arrays(4, 9, 1e-3, 3.0, ArrayPose(orientation=(0.1, 0.2, 0.3)), ArrayPose(orientation=(1.0, 2.0, 3.0)))
    np.testing.assert_allclose(pairwise_distances(rx, tx), pairwise_distances(tx, rx).T, rtol=0, atol=0)


@pytest.mark.example
def test_broadside_offsets_follow_pythagoras():
    s, d = 2.5e-3, 10.0
    tx, rx = link_arrays(4, 4, s, d)
    dist = pairwise_distances(tx, rx)
    excess = dist - d
    assert np.all(excess >= 0)
    assert excess.max() <= 1.6e-6
    # lateral offset between element pairs, from positions
    lateral = rx.element_positions[:, None, 1:] - tx.element_positions[None, :, 1:]
    delta2 = np.sum(lateral**2, axis=-1)
    np.testing.assert_allclose(excess, delta2 / (2 * d), rtol=1e-6, atol=1e-18)


def test_overlapping_elements_rejected():
    tx = build_square_array(4, 1e-3)
    with pytest.raises(errors.OverlappingElements):
        pairwise_distances(tx, tx)


@pytest.mark.example
def test_random_pose_is_seed_deterministic():
    a = random_pose(np.random.default_rng(7))
    b = random_pose(np.random.default_rng(7))
    assert a == b


@pytest.mark.example
def test_random_pose_angles_are_uniform():
    rng = np.random.default_rng(2024)
    draws = np.array([random_pose(rng).orientation for _ in range(10_000)])
    assert np.all((draws >= 0) & (draws < TWO_PI))
    sigma = TWO_PI / math.sqrt(12) / math.sqrt(len(draws))
    assert np.all(np.abs(draws.mean(axis=0) - math.pi) < 3 * sigma)


@pytest.mark.example
def test_identity_orientation_is_broadside():
    arr = build_square_array(9, 1e-3, ArrayPose((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)))
    assert np.all(arr.element_positions[:, 0] == 0.0)
    np.testing.assert_array_equal(rotation_matrix(0.0, 0.0, 0.0), np.eye(3))


def test_near_field_warning():
    tx = build_square_array(64, 0.01)
    with pytest.warns(UserWarning, match="d/10"):
        assert warn_if_near_field(tx, tx, 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not warn_if_near_field(tx, tx, 100.0)
