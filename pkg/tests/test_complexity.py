import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctmark.complexity import (
    DatasetStats,
    StrengthParams,
    StrengthState,
    alpha_chain,
    block_complexity,
    complexity_map,
    dataset_stats,
    image_mean_complexity,
    initial_alpha,
    next_alpha,
    stack_block_complexity,
)
from ctmark.image import DimensionError


def brute_force_map(grid):
    """Literal per-pixel sum of absolute neighbor differences."""
    grid = np.asarray(grid, dtype=float)
    m, n = grid.shape
    out = np.zeros((m - 2, n - 2))
    for x in range(1, m - 1):
        for y in range(1, n - 1):
            total = 0.0
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    if dx or dy:
                        total += abs(grid[x, y] - grid[x + dx, y + dy])
            out[x - 1, y - 1] = total
    return out


class TestComplexityMap:
    def test_constant_grid_is_zero(self):
        assert complexity_map(np.full((3, 3), 7.0)).item() == 0.0

    def test_center_spike(self):
        grid = np.zeros((3, 3))
        grid[1, 1] = 10.0
        assert complexity_map(grid).item() == 80.0

    def test_shift_invariance(self, rng):
        grid = rng.integers(0, 200, size=(6, 7)).astype(float)
        assert np.allclose(complexity_map(grid), complexity_map(grid + 55.0))

    def test_too_small_raises(self):
        with pytest.raises(DimensionError):
            complexity_map(np.zeros((2, 5)))

    def test_uint8_input_does_not_wrap(self):
        grid = np.array([[0, 0, 0], [0, 255, 0], [0, 0, 0]], dtype=np.uint8)
        assert complexity_map(grid).item() == 8 * 255

    @settings(max_examples=40, deadline=None)
    @given(m=st.integers(3, 7), n=st.integers(3, 7), seed=st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, m, n, seed):
        grid = np.random.default_rng(seed).integers(0, 256, size=(m, n)).astype(float)
        assert np.allclose(complexity_map(grid), brute_force_map(grid))


class TestBlockComplexity:
    def test_constant_block(self):
        assert block_complexity(np.full((4, 4), 9.0)) == 0.0

    def test_homogeneous_scaling(self, rng):
        block = rng.integers(0, 100, size=(5, 5)).astype(float)
        assert block_complexity(3.0 * block) == pytest.approx(3.0 * block_complexity(block))

    def test_checkerboard_16(self):
        # diagonal neighbors share the center's parity, so exactly the four
        # edge neighbors differ at every interior pixel
        idx = np.add.outer(np.arange(16), np.arange(16))
        board = np.where(idx % 2 == 0, 0.0, 255.0)
        assert block_complexity(board) == pytest.approx(4 * 255)
        assert block_complexity(board) == pytest.approx(brute_force_map(board).mean())

    def test_checkerboard_beats_gradient_with_same_histogram(self):
        idx = np.add.outer(np.arange(8), np.arange(8))
        board = np.where(idx % 2 == 0, 0.0, 255.0)
        gradient = np.zeros((8, 8))
        gradient[:, 4:] = 255.0  # same two-valued histogram, rows constant
        assert block_complexity(board) > block_complexity(gradient)

    def test_stack_matches_scalar(self, rng):
        blocks = rng.integers(0, 256, size=(6, 4, 4)).astype(float)
        vec = stack_block_complexity(blocks)
        assert np.allclose(vec, [block_complexity(b) for b in blocks])


class TestImageMean:
    def test_constant_image(self):
        assert image_mean_complexity(np.full((8, 8), 42, dtype=np.uint8)) == 0.0

    def test_mirror_symmetry(self, rng):
        img = rng.integers(0, 256, size=(9, 11), dtype=np.uint8)
        assert image_mean_complexity(img) == pytest.approx(
            image_mean_complexity(img[:, ::-1])
        )

    def test_single_interior_pixel(self):
        grid = np.zeros((3, 3), dtype=np.uint8)
        grid[1, 1] = 10
        assert image_mean_complexity(grid) == 80.0


class TestDatasetStats:
    @staticmethod
    def spike_image(center):
        grid = np.zeros((3, 3), dtype=np.uint8)
        grid[1, 1] = center
        return grid

    def test_single_image(self):
        stats = dataset_stats([self.spike_image(5)])
        assert stats.mu_d == 40.0 and stats.sigma_d == 0.0 and stats.image_count == 1

    def test_population_deviation_of_two(self):
        stats = dataset_stats([self.spike_image(5), self.spike_image(10)])
        assert stats.mu_d == pytest.approx(60.0)
        assert stats.sigma_d == pytest.approx(20.0)

    def test_all_constant_images(self):
        stats = dataset_stats([np.full((4, 4), 9, dtype=np.uint8)] * 3)
        assert stats.mu_d == 0.0 and stats.sigma_d == 0.0

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            dataset_stats([])

    def test_json_roundtrip(self):
        stats = DatasetStats(mu_d=12.5, sigma_d=3.25, image_count=7)
        assert DatasetStats.from_json(stats.to_json()) == stats


class TestInitialAlpha:
    STATS = DatasetStats(mu_d=40.0, sigma_d=5.0, image_count=10)

    def test_within_band_keeps_alpha0(self):
        assert initial_alpha(40.0, self.STATS, 11.0) == 11.0
        assert initial_alpha(44.9, self.STATS, 11.0) == 11.0

    def test_above_band_scales_up(self):
        assert initial_alpha(60.0, self.STATS, 11.0) == pytest.approx(16.5)

    def test_below_band_scales_down(self):
        assert initial_alpha(20.0, self.STATS, 11.0) == pytest.approx(5.5)

    def test_degenerate_dataset(self):
        flat = DatasetStats(mu_d=0.0, sigma_d=0.0, image_count=2)
        assert initial_alpha(3.0, flat, 11.0) == 11.0


class TestNextAlpha:
    PARAMS = StrengthParams()

    def test_growth_branch(self):
        state = StrengthState(alpha_i=11.0, alpha_m=11.0, prev_block_complexity=10.0)
        out = next_alpha(state, 13.0, self.PARAMS)
        assert out.alpha_m == pytest.approx(15.73)
        assert out.prev_block_complexity == 13.0

    def test_decay_branch_hits_floor(self):
        state = StrengthState(alpha_i=11.0, alpha_m=11.0, prev_block_complexity=10.0)
        out = next_alpha(state, 5.0, self.PARAMS)
        assert out.alpha_m == pytest.approx(5.5)

    def test_flat_step_multiplies_by_s(self):
        state = StrengthState(alpha_i=11.0, alpha_m=11.0, prev_block_complexity=10.0)
        out = next_alpha(state, 10.0, self.PARAMS)
        assert out.alpha_m == pytest.approx(12.1)

    def test_zero_previous_complexity_guarded(self):
        state = StrengthState(alpha_i=11.0, alpha_m=11.0, prev_block_complexity=0.0)
        out = next_alpha(state, 50.0, self.PARAMS)
        assert out.alpha_m == pytest.approx(16.5)  # huge gamma capped at t2

    def test_both_flat_means_gamma_zero(self):
        state = StrengthState(alpha_i=11.0, alpha_m=11.0, prev_block_complexity=0.0)
        out = next_alpha(state, 0.0, self.PARAMS)
        assert out.alpha_m == pytest.approx(12.1)

    @settings(max_examples=100, deadline=None)
    @given(
        alpha_i=st.floats(0.5, 50.0),
        complexities=st.lists(st.floats(0.0, 1e4), min_size=1, max_size=60),
    )
    def test_chain_never_escapes_clamp(self, alpha_i, complexities):
        params = StrengthParams()
        alphas = alpha_chain(alpha_i, np.array(complexities), params)
        assert (alphas >= params.t1 * alpha_i - 1e-9).all()
        assert (alphas <= params.t2 * alpha_i + 1e-9).all()

    @settings(max_examples=100, deadline=None)
    @given(
        prev_c=st.floats(0.1, 100.0),
        alpha_m=st.floats(5.5, 16.5),
        c_lo=st.floats(0.0, 200.0),
        c_hi=st.floats(0.0, 200.0),
    )
    def test_monotone_in_gamma(self, prev_c, alpha_m, c_lo, c_hi):
        c_lo, c_hi = sorted((c_lo, c_hi))
        state = StrengthState(alpha_i=11.0, alpha_m=alpha_m, prev_block_complexity=prev_c)
        lo = next_alpha(state, c_lo, self.PARAMS).alpha_m
        hi = next_alpha(state, c_hi, self.PARAMS).alpha_m
        assert lo <= hi + 1e-12

    def test_rejects_negative_complexity(self):
        state = StrengthState(11.0, 11.0, 1.0)
        with pytest.raises(ValueError):
            next_alpha(state, -1.0, self.PARAMS)


class TestStrengthParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            StrengthParams(s=0.9)
        with pytest.raises(ValueError):
            StrengthParams(t1=0.0)
        with pytest.raises(ValueError):
            StrengthParams(t1=0.8, t2=0.9)
        with pytest.raises(ValueError):
            StrengthParams(alpha0_approx=0.0)

    def test_dict_roundtrip(self):
        params = StrengthParams(alpha0_approx=12.0, t2=2.0)
        assert StrengthParams.from_dict(params.to_dict()) == params
