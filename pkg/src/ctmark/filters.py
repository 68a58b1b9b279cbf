"""Construction of the biorthogonal 9/7 filter pair and the 2-D fan filters
derived from it.

The 1-D pair is built at machine precision by factoring the degree-7 maxflat
halfband product filter: the real root of its cubic factor goes to the 7-tap
synthesis lowpass, the complex pair to the 9-tap analysis lowpass.  The 2-D
diamond/fan filters are obtained with a McClellan transform of the same pair,
which preserves the halfband identity on the quincunx lattice.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve


def _cos_poly_to_taps(coeffs: np.ndarray) -> np.ndarray:
    """Turn a polynomial in cos(w) into the taps of a zero-phase symmetric filter."""
    a = chebyshev.poly2cheb(coeffs)
    n = len(a) - 1
    taps = np.zeros(2 * n + 1)
    taps[n] = a[0]
    for j in range(1, n + 1):
        taps[n - j] = taps[n + j] = a[j] / 2.0
    return taps


@lru_cache(maxsize=None)
def lowpass_pair_9_7(dc_analysis: float, dc_synthesis: float):
    """Biorthogonal 9/7 lowpass pair (analysis, synthesis) as 1-D taps.

    The pair satisfies the perfect-reconstruction condition: the product
    filter p = conv(h, g) is halfband (p[center] = 1, even offsets zero)
    whenever dc_analysis * dc_synthesis == 2.  Constants then survive the
    downsample/predict round trip exactly for any such gain split.
    """
    # cubic factor of the maxflat halfband product, in y = (1 - cos w)/2
    roots = np.roots([20.0, 10.0, 4.0, 1.0])
    r = float(roots[np.abs(roots.imag) < 1e-9].real[0])
    q = roots[roots.imag > 1e-9][0]

    y = np.array([0.5, -0.5])                      # y as a polynomial in cos w
    lift = npoly.polymul([0.5, 0.5], [0.5, 0.5])   # ((1 + cos w)/2)^2

    quad = npoly.polyadd(npoly.polymul(y, y), npoly.polymul([-2.0 * q.real], y))
    quad = npoly.polyadd(quad, [abs(q) ** 2])
    lin = npoly.polyadd(y, [-r])

    s_h = dc_analysis / abs(q) ** 2
    s_g = dc_synthesis / (-r)

    h = _cos_poly_to_taps(s_h * npoly.polymul(lift, quad))
    g = _cos_poly_to_taps(s_g * npoly.polymul(lift, lin))
    h.setflags(write=False)
    g.setflags(write=False)
    return h, g


@lru_cache(maxsize=None)
def pyramid_filters():
    """The 9/7 pair at the gain split used by the pyramid stage.

    Both filters carry DC gain sqrt(2), the classic pyramid convention: the
    coarse scale of a constant image is that constant scaled by 2, and a unit
    perturbation of a coarse coefficient costs about unit energy in the
    reconstruction, so strength factors are commensurable across scales.
    """
    return lowpass_pair_9_7(dc_analysis=np.sqrt(2.0), dc_synthesis=np.sqrt(2.0))


DIAMOND_KERNEL = np.array([[0.0, 1.0, 0.0],
                           [1.0, 0.0, 1.0],
                           [0.0, 1.0, 0.0]]) / 4.0


def mcclellan_transform(taps: np.ndarray, kernel: np.ndarray = DIAMOND_KERNEL) -> np.ndarray:
    """Map a zero-phase symmetric 1-D filter to a zero-phase 2-D filter.

    cos(w) in the 1-D frequency response is replaced by the response of the
    transform kernel; with the diamond kernel this sends the halfband point
    w = pi to the quincunx alias frequency (pi, pi).
    """
    taps = np.asarray(taps, dtype=float)
    n = (taps.size - 1) // 2
    a = np.concatenate(([taps[n]], 2.0 * taps[n + 1:]))

    def embed(f, size):
        out = np.zeros((size, size))
        o = (size - f.shape[0]) // 2
        out[o:o + f.shape[0], o:o + f.shape[1]] = f
        return out

    size = 2 * n + 1
    t_prev = np.array([[1.0]])     # T_0
    t_cur = kernel.copy()          # T_1
    h = a[0] * embed(t_prev, size)
    if n >= 1:
        h += a[1] * embed(t_cur, size)
    for k in range(2, n + 1):
        t_next = 2.0 * convolve(kernel, t_cur) - embed(t_prev, t_cur.shape[0] + 2)
        h += a[k] * embed(t_next, size)
        t_prev, t_cur = t_cur, t_next
    return h


def modulate_taps(taps: np.ndarray) -> np.ndarray:
    """Multiply 1-D taps by (-1)^n about the center (lowpass <-> highpass)."""
    taps = np.asarray(taps, dtype=float)
    c = taps.size // 2
    sign = np.where((np.arange(taps.size) - c) % 2 == 0, 1.0, -1.0)
    return taps * sign


def modulate_cols(f: np.ndarray) -> np.ndarray:
    """Multiply column j of a 2-D filter by (-1)^(j - center): diamond -> fan."""
    c = f.shape[1] // 2
    sign = np.where((np.arange(f.shape[1]) - c) % 2 == 0, 1.0, -1.0)
    return f * sign[np.newaxis, :]


@lru_cache(maxsize=None)
def fan_filters():
    """Analysis and synthesis fan filter pairs for the two-channel quincunx bank.

    Returns ((k0, k1), (g0, g1)): analysis lowpass/highpass and synthesis
    lowpass/highpass.  All four are zero-phase; the highpass filters are the
    modulated versions of the opposite channel's lowpass, which together with
    a one-sample row stagger gives alias cancellation on the quincunx lattice.
    """
    h1d, g1d = lowpass_pair_9_7(dc_analysis=np.sqrt(2.0), dc_synthesis=np.sqrt(2.0))
    k0 = modulate_cols(mcclellan_transform(h1d))
    k1 = modulate_cols(mcclellan_transform(modulate_taps(g1d)))
    g0 = modulate_cols(mcclellan_transform(g1d))
    g1 = modulate_cols(mcclellan_transform(modulate_taps(h1d)))
    for f in (k0, k1, g0, g1):
        f.setflags(write=False)
    return (k0, k1), (g0, g1)
