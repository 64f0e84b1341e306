"""Activation-map computation against a brute-force oracle, plus the
max-normalization guard."""

import numpy as np
import pytest

from divcam import (
    Cam,
    ClassWeights,
    FeatureStack,
    NonPositiveMaxError,
    ShapeError,
    compute_cam,
    normalize_by_max,
)

from conftest import random_positive_map


def naive_cam(features, weights):
    """Independent triple-loop weighted sum in plain Python floats."""
    channels = features.tolist()
    wts = [float(v) for v in weights]
    height, width = len(channels[0]), len(channels[0][0])
    out = [[0.0] * width for _ in range(height)]
    for weight, fmap in zip(wts, channels):
        for i in range(height):
            row = fmap[i]
            for j in range(width):
                out[i][j] += weight * row[j]
    return np.array(out)


class TestComputeCam:
    def test_disjoint_support_reads_off(self):
        maps = np.zeros((3, 2, 2), np.float32)
        maps[0, 0, 0] = 1.0
        maps[1, 0, 1] = 1.0
        maps[2, 1, :] = 1.0
        cam = compute_cam(
            FeatureStack(maps, model_id="n1"),
            ClassWeights(np.array([1.0, 2.0, 3.0], np.float32), class_index=1),
        )
        np.testing.assert_array_equal(cam.map, np.array([[1, 2], [3, 3]], np.float32))
        assert cam.class_index == 1
        assert cam.model_id == "n1"

    def test_zero_weights_annihilate(self, rng):
        stack = FeatureStack(rng.random((16, 4, 4)).astype(np.float32))
        cam = compute_cam(stack, ClassWeights(np.zeros(16, np.float32)))
        np.testing.assert_array_equal(cam.map, np.zeros((4, 4), np.float32))

    def test_matches_naive_sum_at_scale(self, rng):
        features = rng.standard_normal((2048, 7, 7)).astype(np.float32)
        weights = rng.standard_normal(2048).astype(np.float32)
        got = compute_cam(FeatureStack(features), ClassWeights(weights)).map
        want = naive_cam(features, weights)
        np.testing.assert_allclose(got, want, rtol=1e-4, atol=1e-4 * np.abs(want).max())

    def test_channel_mismatch_names_both_counts(self):
        stack = FeatureStack(np.zeros((8, 2, 2), np.float32))
        with pytest.raises(ShapeError, match="5.*8|8.*5"):
            compute_cam(stack, ClassWeights(np.zeros(5, np.float32)))

    def test_linearity(self, rng):
        for _ in range(20):
            c = int(rng.integers(1, 64))
            features = FeatureStack(rng.random((c, 5, 5)).astype(np.float32))
            w1 = rng.random(c).astype(np.float32)
            w2 = rng.random(c).astype(np.float32)
            combined = compute_cam(features, ClassWeights(w1 + w2)).map
            separate = compute_cam(features, ClassWeights(w1)).map + compute_cam(
                features, ClassWeights(w2)
            ).map
            np.testing.assert_allclose(combined, separate, rtol=1e-4, atol=1e-6)

    def test_homogeneity(self, rng):
        for _ in range(20):
            c = int(rng.integers(1, 64))
            features = FeatureStack(rng.random((c, 5, 5)).astype(np.float32))
            w = rng.random(c).astype(np.float32)
            scale = float(rng.uniform(0.1, 10.0))
            scaled = compute_cam(features, ClassWeights(np.float32(scale) * w)).map
            reference = scale * compute_cam(features, ClassWeights(w)).map.astype(np.float64)
            np.testing.assert_allclose(scaled, reference, rtol=1e-4, atol=1e-6)


class TestNormalizeByMax:
    def test_worked_example_left_operand(self):
        cam = Cam(np.array([[1, 1, 5], [0, 6, 4], [0, 1, 0]], np.float32))
        result = normalize_by_max(cam)
        expected = np.array(
            [[1 / 6, 1 / 6, 5 / 6], [0, 1, 2 / 3], [0, 1 / 6, 0]], np.float64
        )
        np.testing.assert_allclose(result.map, expected, rtol=1e-6)
        assert result.map.max() == 1.0

    def test_idempotent(self, rng):
        cam = Cam(random_positive_map(rng, 5, 5, np.float32))
        once = normalize_by_max(cam)
        twice = normalize_by_max(once)
        np.testing.assert_array_equal(once.map, twice.map)

    def test_all_zero_rejected(self):
        with pytest.raises(NonPositiveMaxError):
            normalize_by_max(Cam(np.zeros((3, 3), np.float32)))

    def test_negative_peak_rejected_and_carried(self):
        with pytest.raises(NonPositiveMaxError) as excinfo:
            normalize_by_max(Cam(np.full((2, 2), -3.0, np.float32), model_id="n2"))
        assert excinfo.value.maximum == -3.0
        assert "n2" in str(excinfo.value)

    def test_argmax_cells_preserved(self, rng):
        for _ in range(50):
            data = random_positive_map(rng, 6, 6, np.float32)
            result = normalize_by_max(Cam(data))
            np.testing.assert_array_equal(
                result.map == result.map.max(), data == data.max()
            )

    def test_positive_scale_invariance(self, rng):
        for _ in range(50):
            data = random_positive_map(rng, 4, 4)
            scale = float(rng.uniform(1e-3, 1e3))
            plain = normalize_by_max(Cam(data)).map
            scaled = normalize_by_max(Cam(scale * data)).map
            np.testing.assert_allclose(scaled, plain, rtol=1e-6)

    def test_metadata_carried(self):
        cam = Cam(np.ones((2, 2), np.float32), class_index=1, model_id="n1")
        result = normalize_by_max(cam)
        assert (result.class_index, result.model_id) == (1, "n1")


class TestCamType:
    def test_rank_enforced(self):
        with pytest.raises(ShapeError):
            Cam(np.zeros((2, 2, 2), np.float32))

    def test_from_file_rejects_wrong_rank(self, tmp_path):
        from divcam import save_tensor

        path = tmp_path / "v.npy"
        save_tensor(np.zeros(4, np.float32), path)
        with pytest.raises(ShapeError):
            Cam.from_file(path)
