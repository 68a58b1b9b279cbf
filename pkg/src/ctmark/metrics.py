"""Fidelity metrics (PSNR, SSIM) and payload similarity (NC, BER)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

#: SSIM reference constants for 8-bit images.
_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_L = 255.0


def _check_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or a.shape != b.shape:
        raise ValueError("images must be 2-D and of equal size")
    return a, b


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; identical images give +inf."""
    a, b = _check_pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(_SSIM_L**2 / mse)


def _gaussian_window(n: int, sigma: float) -> np.ndarray:
    x = np.arange(n) - (n - 1) / 2.0
    w = np.exp(-(x**2) / (2.0 * sigma**2))
    return w / w.sum()


def _local_mean(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    r = (w.size - 1) // 2
    y = correlate1d(x, w, axis=0, mode="constant")
    y = correlate1d(y, w, axis=1, mode="constant")
    return y[r:-r, r:-r]


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean local structural similarity, 11x11 Gaussian window, sigma 1.5.

    The map is evaluated only where the window fits entirely inside the
    images, so inputs must be at least 11x11.
    """
    a, b = _check_pair(a, b)
    if min(a.shape) < _SSIM_WINDOW:
        raise ValueError(f"ssim needs images of at least {_SSIM_WINDOW}x{_SSIM_WINDOW}")
    w = _gaussian_window(_SSIM_WINDOW, _SSIM_SIGMA)
    c1 = (_SSIM_K1 * _SSIM_L) ** 2
    c2 = (_SSIM_K2 * _SSIM_L) ** 2

    mu_a = _local_mean(a, w)
    mu_b = _local_mean(b, w)
    var_a = _local_mean(a * a, w) - mu_a**2
    var_b = _local_mean(b * b, w) - mu_b**2
    cov = _local_mean(a * b, w) - mu_a * mu_b

    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class SimilarityResult:
    """Normalized correlation and bit error rate between two bit streams."""

    nc: float
    ber: float


def similarity(original: np.ndarray, extracted: np.ndarray) -> SimilarityResult:
    """NC and BER between two 0/1 bit streams of equal length.

    NC is the binary cross-correlation sum(w * w') / sqrt(sum(w^2) sum(w'^2)),
    defined as 1 when both streams are all-zero and 0 when exactly one is.
    """
    w = np.asarray(original).ravel().astype(np.float64)
    v = np.asarray(extracted).ravel().astype(np.float64)
    if w.size != v.size:
        raise ValueError("bit streams must have equal length")
    if not (np.isin(w, (0, 1)).all() and np.isin(v, (0, 1)).all()):
        raise ValueError("bit streams must be 0/1 valued")
    ber = float(np.mean(w != v))
    n1, n2 = float(w.sum()), float(v.sum())
    if n1 == 0.0 and n2 == 0.0:
        nc = 1.0
    elif n1 == 0.0 or n2 == 0.0:
        nc = 0.0
    else:
        nc = float(np.dot(w, v) / math.sqrt(n1 * n2))
    return SimilarityResult(nc=nc, ber=ber)
