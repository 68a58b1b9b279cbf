import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctmark.metrics import psnr, similarity, ssim


class TestPSNR:
    def test_identical_is_infinite(self, rng):
        img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        assert math.isinf(psnr(img, img))

    def test_off_by_one_everywhere(self):
        a = np.full((32, 32), 100, dtype=np.uint8)
        assert psnr(a, a + 1) == pytest.approx(10 * math.log10(255**2), abs=1e-9)

    def test_full_swing(self):
        a = np.zeros((8, 8), dtype=np.uint8)
        b = np.full((8, 8), 255, dtype=np.uint8)
        assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((4, 4)), np.zeros((4, 5)))

    @settings(max_examples=40, deadline=None)
    @given(scale=st.integers(1, 10))
    def test_monotone_in_error(self, scale):
        base = np.full((16, 16), 100.0)
        small = psnr(base, base + scale)
        large = psnr(base, base + scale + 1)
        assert large < small


class TestSSIM:
    def test_identical_is_one(self, rng):
        img = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_constant_extremes_closed_form(self):
        a = np.zeros((16, 16), dtype=np.uint8)
        b = np.full((16, 16), 255, dtype=np.uint8)
        c1 = (0.01 * 255) ** 2
        assert ssim(a, b) == pytest.approx(c1 / (255.0**2 + c1), rel=1e-9)

    def test_symmetry(self, rng):
        a = rng.integers(0, 256, size=(24, 24), dtype=np.uint8)
        b = rng.integers(0, 256, size=(24, 24), dtype=np.uint8)
        assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((10, 10)), np.zeros((10, 10)))

    def test_degrades_with_noise(self, rng):
        from ctmark.synth import synthetic_image

        img = synthetic_image("mixed", shape=(64, 64), seed=2)
        noisy = np.clip(img.astype(int) + rng.integers(-40, 41, img.shape), 0, 255)
        degraded = ssim(img, noisy.astype(np.uint8))
        assert degraded < ssim(img, img) - 0.1


class TestSimilarity:
    def test_identical(self):
        bits = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
        out = similarity(bits, bits)
        assert out.nc == 1.0 and out.ber == 0.0

    def test_complement(self):
        bits = np.array([1, 0, 1, 0], dtype=np.uint8)
        assert similarity(bits, 1 - bits).ber == 1.0

    def test_half_flipped(self):
        a = np.array([1, 1, 0, 0], dtype=np.uint8)
        b = np.array([1, 0, 0, 1], dtype=np.uint8)
        assert similarity(a, b).ber == 0.5

    def test_both_all_zero(self):
        z = np.zeros(8, dtype=np.uint8)
        assert similarity(z, z).nc == 1.0

    def test_one_all_zero(self):
        z = np.zeros(8, dtype=np.uint8)
        o = np.ones(8, dtype=np.uint8)
        assert similarity(z, o).nc == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            similarity(np.zeros(4, dtype=np.uint8), np.zeros(5, dtype=np.uint8))

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            similarity(np.array([0, 2]), np.array([0, 1]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 64), st.integers(0, 2**32 - 1))
    def test_ber_is_a_metric(self, n, seed):
        gen = np.random.default_rng(seed)
        a, b, c = (gen.integers(0, 2, size=n, dtype=np.uint8) for _ in range(3))
        ab, ba = similarity(a, b).ber, similarity(b, a).ber
        assert ab == ba
        assert similarity(a, a).ber == 0.0
        assert similarity(a, c).ber <= ab + similarity(b, c).ber + 1e-12

    def test_nc_matches_binary_cross_correlation(self, rng):
        a = rng.integers(0, 2, size=100, dtype=np.uint8)
        b = rng.integers(0, 2, size=100, dtype=np.uint8)
        expected = (a * b).sum() / math.sqrt(a.sum() * b.sum())
        assert similarity(a, b).nc == pytest.approx(expected, rel=1e-12)
