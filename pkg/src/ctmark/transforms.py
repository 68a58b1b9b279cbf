"""Cascaded transform stack: orthonormal block DCT, one-level Laplacian
pyramid, and a two-level quincunx/fan directional filter bank, composed into
the one-level four-direction decomposition used for embedding.

The pyramid reconstruction is structural (the residual stores the exact
prediction error), so its round trip is exact for any boundary handling;
whole-sample mirror extension is used so that constants have a zero residual.
The directional bank uses periodic extension, under which the two-channel
quincunx stages are exactly invertible for any even-size input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import correlate1d

from .filters import fan_filters, pyramid_filters
from .image import DimensionError

# ---------------------------------------------------------------------------
# Block DCT


@lru_cache(maxsize=None)
def _dct_matrix(n: int) -> np.ndarray:
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    d = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * m + 1) * k / (2 * n))
    d[0] /= np.sqrt(2.0)
    d.setflags(write=False)
    return d


def dct2(block: np.ndarray) -> np.ndarray:
    """Orthonormal 2-D type-II DCT of a square block."""
    block = np.asarray(block, dtype=np.float64)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        raise DimensionError("dct2 expects a square block")
    d = _dct_matrix(block.shape[0])
    return d @ block @ d.T


def idct2(coeffs: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`dct2`."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 2 or coeffs.shape[0] != coeffs.shape[1]:
        raise DimensionError("idct2 expects a square block")
    d = _dct_matrix(coeffs.shape[0])
    return d.T @ coeffs @ d


def dct2_stack(blocks: np.ndarray) -> np.ndarray:
    """dct2 applied to a stack of shape (n, L, L)."""
    d = _dct_matrix(blocks.shape[-1])
    return np.einsum("ik,nkl,jl->nij", d, blocks, d, optimize=True)


def idct2_stack(coeffs: np.ndarray) -> np.ndarray:
    d = _dct_matrix(coeffs.shape[-1])
    return np.einsum("ki,nkl,lj->nij", d, coeffs, d, optimize=True)


# ---------------------------------------------------------------------------
# Laplacian pyramid (one level)


def _sep_lowpass(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    y = correlate1d(x, taps, axis=0, mode="mirror")
    return correlate1d(y, taps, axis=1, mode="mirror")


def _lp_predict(coarse: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    _, g = pyramid_filters()
    up = np.zeros(shape)
    up[::2, ::2] = coarse
    return _sep_lowpass(up, g)


def lp_decompose(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split into a half-size lowpass image and a full-size prediction residual."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] % 2 or x.shape[1] % 2:
        raise DimensionError("lp_decompose needs even dimensions")
    h, _ = pyramid_filters()
    coarse = _sep_lowpass(x, h)[::2, ::2]
    return coarse, x - _lp_predict(coarse, x.shape)


def lp_reconstruct(coarse: np.ndarray, bandpass: np.ndarray) -> np.ndarray:
    coarse = np.asarray(coarse, dtype=np.float64)
    bandpass = np.asarray(bandpass, dtype=np.float64)
    if (coarse.shape[0] * 2, coarse.shape[1] * 2) != bandpass.shape:
        raise DimensionError("bandpass must be twice the coarse size per dimension")
    return _lp_predict(coarse, bandpass.shape) + bandpass


# ---------------------------------------------------------------------------
# Directional filter bank (two quincunx levels, four subbands)
#
# Unimodular resampling on the periodic grid; the index maps realize the
# shear matrices [1,±1;0,1] (rows) and [1,0;±1,1] (columns).


def _shear_rows(x: np.ndarray, s: int) -> np.ndarray:
    m, n = x.shape
    rows = (np.arange(m)[:, None] + s * np.arange(n)[None, :]) % m
    return x[rows, np.arange(n)[None, :]]


def _shear_cols(x: np.ndarray, s: int) -> np.ndarray:
    m, n = x.shape
    cols = (np.arange(n)[None, :] + s * np.arange(m)[:, None]) % n
    return x[np.arange(m)[:, None], cols]


def _qdown(x: np.ndarray, stage: str) -> np.ndarray:
    if stage == "1r":
        return _shear_cols(_shear_rows(x, -1)[::2, :], 1)
    # '2c'
    return _shear_rows(_shear_cols(x, -1)[:, ::2], 1)


def _qup(x: np.ndarray, stage: str) -> np.ndarray:
    m, n = x.shape
    if stage == "1r":
        z = np.zeros((2 * m, n))
        z[::2, :] = _shear_cols(x, -1)
        return _shear_rows(z, 1)
    z = np.zeros((m, 2 * n))
    z[:, ::2] = _shear_rows(x, -1)
    return _shear_cols(z, 1)


_KERNEL_FFT_CACHE: dict[tuple[bytes, tuple[int, int]], np.ndarray] = {}


def _kernel_fft(f: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Spectrum of a zero-phase kernel embedded on a periodic grid, cached."""
    key = (f.tobytes(), shape)
    spec = _KERNEL_FFT_CACHE.get(key)
    if spec is None:
        grid = np.zeros(shape)
        rows = (np.arange(f.shape[0]) - f.shape[0] // 2) % shape[0]
        cols = (np.arange(f.shape[1]) - f.shape[1] // 2) % shape[1]
        # fold the centered kernel onto the torus (also valid when the
        # kernel is larger than the grid)
        np.add.at(grid, (rows[:, None], cols[None, :]), f)
        spec = np.fft.rfft2(grid)
        _KERNEL_FFT_CACHE[key] = spec
    return spec


def _pfilter(x: np.ndarray, f: np.ndarray, row_shift: int = 0) -> np.ndarray:
    """Zero-phase circular filtering, optionally staggered by one row."""
    y = np.fft.irfft2(np.fft.rfft2(x) * _kernel_fft(f, x.shape), s=x.shape)
    return np.roll(y, row_shift, axis=0) if row_shift else y


def _fb_split(x, k0, k1, stage):
    spectrum = np.fft.rfft2(x)
    y0 = np.fft.irfft2(spectrum * _kernel_fft(k0, x.shape), s=x.shape)
    y1 = np.fft.irfft2(spectrum * _kernel_fft(k1, x.shape), s=x.shape)
    y1 = np.roll(y1, -1, axis=0)
    return _qdown(y0, stage), _qdown(y1, stage)


def _fb_merge(y0, y1, g0, g1, stage):
    x0 = _pfilter(_qup(y0, stage), g0)
    x1 = _pfilter(_qup(y1, stage), g1, row_shift=1)
    return x0 + x1


def dfb_decompose(bandpass: np.ndarray) -> list[np.ndarray]:
    """Split a bandpass image into four critically sampled directional subbands.

    Each subband is half the input size per dimension; the split is linear
    and exactly invertible by :func:`dfb_reconstruct`.
    """
    bandpass = np.asarray(bandpass, dtype=np.float64)
    if bandpass.ndim != 2 or bandpass.shape[0] % 4 or bandpass.shape[1] % 4:
        raise DimensionError("dfb_decompose needs dimensions divisible by 4")
    (k0, k1), _ = fan_filters()
    a0, a1 = _fb_split(bandpass, k0, k1, "1r")
    s0, s1 = _fb_split(a0, k0, k1, "2c")
    s2, s3 = _fb_split(a1, k0, k1, "2c")
    return [s0, s1, s3, s2]


def dfb_reconstruct(subbands: list[np.ndarray]) -> np.ndarray:
    if len(subbands) != 4:
        raise DimensionError("expected exactly four directional subbands")
    s0, s1, s3, s2 = (np.asarray(s, dtype=np.float64) for s in subbands)
    if not (s0.shape == s1.shape == s2.shape == s3.shape):
        raise DimensionError("directional subbands must share one shape")
    _, (g0, g1) = fan_filters()
    a0 = _fb_merge(s0, s1, g0, g1, "2c")
    a1 = _fb_merge(s2, s3, g0, g1, "2c")
    return _fb_merge(a0, a1, g0, g1, "1r")


# ---------------------------------------------------------------------------
# Composed decomposition


@dataclass(frozen=True)
class SubbandSet:
    """One approximate scale plus four directional detail subbands.

    For an M x N input the approximate scale is (M/2) x (N/2) and every
    detail subband has the same size, so the four details together are a
    critical sampling of the bandpass image.
    """

    approximate: np.ndarray
    details: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.details) != 4:
            raise DimensionError("expected four detail subbands")
        for d in self.details:
            if d.shape != self.approximate.shape:
                raise DimensionError("detail subbands must match the approximate scale")


def ct_decompose(image: np.ndarray) -> SubbandSet:
    """One pyramid level followed by the four-direction split of its residual."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] % 4 or image.shape[1] % 4:
        raise DimensionError("ct_decompose needs dimensions divisible by 4")
    coarse, bandpass = lp_decompose(image)
    return SubbandSet(approximate=coarse, details=tuple(dfb_decompose(bandpass)))


def ct_reconstruct(subbands: SubbandSet) -> np.ndarray:
    """Inverse of :func:`ct_decompose`; returns the real-valued image."""
    bandpass = dfb_reconstruct(list(subbands.details))
    return lp_reconstruct(subbands.approximate, bandpass)
