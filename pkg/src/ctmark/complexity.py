"""Two-level complexity analysis driving the adaptive embedding strength.

Pixel complexity is the sum of absolute luminance differences to the eight
neighbors, a cheap texture-masking measure: the larger it is, the less
visible an intensity change at that pixel.  Per-image means ranked against
dataset statistics pick the initial strength factor; the relative complexity
change between consecutively scanned blocks then steers the per-block factor
inside a clamped band.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .image import DimensionError

#: Relative complexity change is undefined on flat predecessors; this floor
#: keeps the update total while leaving ordinary values untouched.
GAMMA_EPS = 1e-9


def complexity_map(grid: np.ndarray) -> np.ndarray:
    """Per-pixel complexity for all non-border pixels of a 2-D grid.

    Value at (x, y) is the sum over the 8 neighbors of |g[x,y] - g[x',y']|,
    so it is zero exactly on constant neighborhoods, shift-invariant, and
    1-homogeneous under scaling.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.shape[0] < 3 or grid.shape[1] < 3:
        raise DimensionError("complexity map needs a grid of at least 3x3")
    center = grid[1:-1, 1:-1]
    out = np.zeros_like(center)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            out += np.abs(center - grid[1 + dx:grid.shape[0] - 1 + dx,
                                        1 + dy:grid.shape[1] - 1 + dy])
    return out


def block_complexity(block: np.ndarray) -> float:
    """Mean interior complexity of one block (neighborhoods stay in-block)."""
    return float(complexity_map(block).mean())


def stack_block_complexity(blocks: np.ndarray) -> np.ndarray:
    """Vectorized :func:`block_complexity` for a stack of shape (n, L, L)."""
    blocks = np.asarray(blocks, dtype=np.float64)
    if blocks.ndim != 3 or blocks.shape[1] < 3 or blocks.shape[2] < 3:
        raise DimensionError("blocks must be (n, L, L) with L >= 3")
    center = blocks[:, 1:-1, 1:-1]
    acc = np.zeros_like(center)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            acc += np.abs(center - blocks[:, 1 + dx:blocks.shape[1] - 1 + dx,
                                          1 + dy:blocks.shape[2] - 1 + dy])
    return acc.mean(axis=(1, 2))


def image_mean_complexity(image: np.ndarray) -> float:
    """Mean pixel complexity over all non-border pixels of an image."""
    return float(complexity_map(image).mean())


@dataclass(frozen=True)
class DatasetStats:
    """Mean and population standard deviation of per-image mean complexities."""

    mu_d: float
    sigma_d: float
    image_count: int

    def __post_init__(self):
        if self.sigma_d < 0:
            raise ValueError("sigma_d must be >= 0")
        if self.image_count < 1:
            raise ValueError("image_count must be >= 1")

    def to_json(self) -> str:
        return json.dumps(
            {"mu_D": self.mu_d, "sigma_D": self.sigma_d, "image_count": self.image_count},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "DatasetStats":
        d = json.loads(text)
        return cls(mu_d=d["mu_D"], sigma_d=d["sigma_D"], image_count=d["image_count"])


def dataset_stats(images: Iterable[np.ndarray]) -> DatasetStats:
    mus = [image_mean_complexity(img) for img in images]
    if not mus:
        raise ValueError("dataset_stats needs at least one image")
    mus = np.asarray(mus)
    return DatasetStats(mu_d=float(mus.mean()), sigma_d=float(mus.std()),
                        image_count=len(mus))


@dataclass(frozen=True)
class StrengthParams:
    """Strength-factor parameters: base strengths per scale and the LCV knobs.

    ``s`` couples relative complexity change to relative strength change;
    ``t1``/``t2`` bound the per-block factor to [t1*alpha_i, t2*alpha_i].
    """

    alpha0_approx: float = 11.0
    alpha0_detail: float = 9.0
    s: float = 1.1
    t1: float = 0.5
    t2: float = 1.5

    def __post_init__(self):
        if self.alpha0_approx <= 0 or self.alpha0_detail <= 0:
            raise ValueError("base strengths must be positive")
        if self.s < 1.0:
            raise ValueError("s must be >= 1")
        if not (0.0 < self.t1 <= 1.0 <= self.t2):
            raise ValueError("need 0 < t1 <= 1 <= t2")

    def to_dict(self) -> dict:
        return {"alpha0_approx": self.alpha0_approx, "alpha0_detail": self.alpha0_detail,
                "s": self.s, "t1": self.t1, "t2": self.t2}

    @classmethod
    def from_dict(cls, d: dict) -> "StrengthParams":
        return cls(**d)


@dataclass(frozen=True)
class StrengthState:
    """Strength-factor chain state after embedding some block."""

    alpha_i: float
    alpha_m: float
    prev_block_complexity: float


def initial_alpha(mu_image: float, stats: DatasetStats, alpha0: float) -> float:
    """Per-image initial strength factor from the dataset ranking.

    Images within one sigma_d of mu_d keep alpha0; beyond that the factor is
    scaled by mu_image / mu_d on either side.  A degenerate all-flat dataset
    (mu_d == 0) keeps alpha0.
    """
    if abs(mu_image - stats.mu_d) <= stats.sigma_d:
        return alpha0
    if stats.mu_d <= 0.0:
        return alpha0
    return alpha0 * (mu_image / stats.mu_d)


def next_alpha(state: StrengthState, c_m: float, params: StrengthParams) -> StrengthState:
    """Advance the strength chain by one block with complexity ``c_m``.

    The factor tracks the complexity ratio (1 + gamma), scaled by s for
    growth and 1/s for decay, and is clamped to [t1*alpha_i, t2*alpha_i].
    """
    if c_m < 0:
        raise ValueError("block complexity must be >= 0")
    prev = state.prev_block_complexity
    if prev <= GAMMA_EPS and c_m <= GAMMA_EPS:
        gamma = 0.0
    else:
        gamma = (c_m - prev) / max(prev, GAMMA_EPS)
    if gamma < 0:
        alpha = max((1.0 + gamma) * state.alpha_m / params.s, params.t1 * state.alpha_i)
    else:
        alpha = min(params.s * (1.0 + gamma) * state.alpha_m, params.t2 * state.alpha_i)
    return StrengthState(alpha_i=state.alpha_i, alpha_m=alpha, prev_block_complexity=c_m)


def alpha_chain(alpha_init: float, complexities: np.ndarray, params: StrengthParams) -> np.ndarray:
    """Strength factors for a scan-ordered complexity sequence.

    The first block uses ``alpha_init`` directly; each later block folds its
    complexity through :func:`next_alpha`.
    """
    complexities = np.asarray(complexities, dtype=np.float64)
    n = complexities.size
    out = np.empty(n)
    out[0] = alpha_init
    state = StrengthState(alpha_init, alpha_init, float(complexities[0]))
    for i in range(1, n):
        state = next_alpha(state, float(complexities[i]), params)
        out[i] = state.alpha_m
    return out
