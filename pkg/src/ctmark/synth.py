"""Deterministic synthetic grayscale test images.

The benchmark accepts any directory of 8-bit grayscale images; these
generators provide a self-contained, reproducible stand-in corpus with a
spread of smooth and textured content comparable to the classic test sets.
A touch of sensor-like grain is added everywhere so block complexities
fluctuate the way camera images do.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .image import quantize_u8


def _normalize(f: np.ndarray, lo: float = 8.0, hi: float = 247.0) -> np.ndarray:
    fmin, fmax = f.min(), f.max()
    if fmax - fmin < 1e-12:
        return np.full_like(f, 0.5 * (lo + hi))
    return lo + (hi - lo) * (f - fmin) / (fmax - fmin)


def _grain(f: np.ndarray, rng: np.random.Generator,
           texture: float = 4.0, noise: float = 1.5) -> np.ndarray:
    """Add camera-like mid-frequency texture and fine grain everywhere."""
    tex = gaussian_filter(rng.normal(size=f.shape), 1.2)
    tex /= tex.std() + 1e-12
    return f + texture * tex + rng.normal(0.0, noise, f.shape)


def smooth_blobs(shape, rng) -> np.ndarray:
    """Soft gradient plus a few wide Gaussian bumps (low complexity)."""
    m, n = shape
    yy, xx = np.mgrid[0:m, 0:n]
    f = 0.3 * xx / n + 0.2 * yy / m
    for _ in range(rng.integers(3, 7)):
        cy, cx = rng.uniform(0, m), rng.uniform(0, n)
        s = rng.uniform(min(m, n) / 10, min(m, n) / 4)
        f += rng.uniform(-1, 1) * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * s * s))
    return _normalize(f)


def filtered_noise(shape, rng, sigma=None) -> np.ndarray:
    """Band-limited noise texture (mid complexity)."""
    sigma = sigma if sigma is not None else rng.uniform(2.0, 6.0)
    return _normalize(gaussian_filter(rng.normal(size=shape), sigma))


def wave_texture(shape, rng) -> np.ndarray:
    """Superposition of oriented low-frequency sinusoids."""
    m, n = shape
    yy, xx = np.mgrid[0:m, 0:n]
    f = np.zeros(shape)
    for _ in range(rng.integers(3, 6)):
        theta = rng.uniform(0, np.pi)
        freq = rng.uniform(0.008, 0.035)
        phase = rng.uniform(0, 2 * np.pi)
        f += rng.uniform(0.4, 1.0) * np.sin(
            2 * np.pi * freq * (np.cos(theta) * xx + np.sin(theta) * yy) + phase
        )
    return _normalize(f, lo=30.0, hi=225.0)


def cartoon(shape, rng) -> np.ndarray:
    """Piecewise-constant shapes with soft edges (smooth areas + strong edges)."""
    m, n = shape
    f = np.full(shape, rng.uniform(60, 190))
    yy, xx = np.mgrid[0:m, 0:n]
    for _ in range(rng.integers(6, 12)):
        level = rng.uniform(20, 235)
        if rng.random() < 0.5:
            y0, x0 = rng.integers(0, m), rng.integers(0, n)
            h, w = rng.integers(m // 8, m // 2), rng.integers(n // 8, n // 2)
            f[y0:min(y0 + h, m), x0:min(x0 + w, n)] = level
        else:
            cy, cx = rng.uniform(0, m), rng.uniform(0, n)
            r = rng.uniform(min(m, n) / 12, min(m, n) / 4)
            f[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = level
    return _normalize(gaussian_filter(f, 1.0))


def mixed(shape, rng) -> np.ndarray:
    """Cartoon regions overlaid with texture, the most natural-looking kind."""
    base = cartoon(shape, rng)
    tex = filtered_noise(shape, rng, sigma=rng.uniform(0.8, 2.0))
    mask = gaussian_filter(rng.normal(size=shape), min(shape) / 8)
    mask = (mask - mask.min()) / (mask.max() - mask.min() + 1e-12)
    return _normalize(base + 0.35 * mask * (tex - tex.mean()))


def flat_field(shape, rng) -> np.ndarray:
    """Nearly featureless field, a clear low-complexity outlier."""
    m, n = shape
    yy, xx = np.mgrid[0:m, 0:n]
    return _normalize(0.2 * xx / n + 0.1 * yy / m, lo=90.0, hi=170.0)


def fine_texture(shape, rng) -> np.ndarray:
    """Dense high-frequency texture, a clear high-complexity outlier."""
    return _normalize(gaussian_filter(rng.normal(size=shape), 1.85))


_KINDS = (smooth_blobs, cartoon, mixed, wave_texture, filtered_noise)
_OUTLIERS = (flat_field, fine_texture)

#: Per-kind grain levels (texture amplitude, white-noise sigma); the flat
#: outlier deliberately carries less grain than the camera-like default.
_GRAIN = {"flat_field": (3.0, 1.1)}


def synthetic_image(kind, shape=(512, 512), seed: int = 0) -> np.ndarray:
    """One deterministic uint8 test image; ``kind`` indexes or names a generator."""
    gens = {g.__name__: g for g in _KINDS + _OUTLIERS}
    gen = gens[kind] if isinstance(kind, str) else _KINDS[kind % len(_KINDS)]
    tag = sum(map(ord, gen.__name__))
    rng = np.random.default_rng(np.random.SeedSequence([tag, seed, shape[0], shape[1]]))
    f = gen(shape, rng)
    texture, noise = _GRAIN.get(gen.__name__, (4.0, 1.5))
    return quantize_u8(_grain(f, rng, texture=texture, noise=noise))


def synthetic_corpus(count: int = 10, shape=(512, 512), seed: int = 0) -> dict[str, np.ndarray]:
    """Named deterministic corpus: mostly mid-complexity kinds plus, when at
    least eight images are requested, one smooth and one textured outlier so
    the dataset ranking has work to do on both sides."""
    kinds: list = []
    for i in range(count):
        kinds.append(_KINDS[i % len(_KINDS)])
    if count >= 8:
        kinds[-2], kinds[-1] = _OUTLIERS
    corpus = {}
    for i, gen in enumerate(kinds):
        name = f"{gen.__name__}_{i:02d}"
        corpus[name] = synthetic_image(gen.__name__, shape=shape, seed=seed + i)
    return corpus
