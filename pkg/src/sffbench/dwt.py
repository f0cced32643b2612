"""Single-level orthogonal Daubechies-6 wavelet transform, periodic extension.

Filters are applied with a centring shift of ``len(h) // 2 - 1`` samples so
that coefficient ``n`` describes input samples ``2n`` and ``2n + 1``. The
shift is a circular rotation of the input, so the transform stays orthogonal
and perfectly invertible.
"""

import numpy as np

#: Daubechies-6 (12-tap) scaling filter, normalized to sum sqrt(2); taps from a
#: 50-digit spectral factorization rounded to double.
DB6_LOWPASS = np.array([
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
])


def quadrature_mirror(lowpass):
    """Highpass partner ``g[k] = (-1)**k * h[L-1-k]`` of an orthogonal lowpass."""
    h = np.asarray(lowpass, dtype=np.float64)
    signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
    return signs * h[::-1]


DB6_HIGHPASS = quadrature_mirror(DB6_LOWPASS)

_SHIFT = DB6_LOWPASS.size // 2 - 1


def _indices(n):
    """``(n // 2, L)`` table of input positions feeding each coefficient."""
    m = np.arange(n // 2)[:, None]
    k = np.arange(DB6_LOWPASS.size)[None, :]
    return (2 * m + k - _SHIFT) % n


def analyze(x, axis=-1):
    """Split `x` along `axis` into (approximation, detail) halves.

    The length along `axis` must be even.
    """
    x = np.moveaxis(np.asarray(x, dtype=np.float64), axis, -1)
    n = x.shape[-1]
    if n % 2:
        raise ValueError(f"signal length must be even, got {n}")
    idx = _indices(n)
    lo = np.zeros(x.shape[:-1] + (n // 2,))
    hi = np.zeros_like(lo)
    for k in range(DB6_LOWPASS.size):
        taps = x[..., idx[:, k]]
        lo += DB6_LOWPASS[k] * taps
        hi += DB6_HIGHPASS[k] * taps
    return np.moveaxis(lo, -1, axis), np.moveaxis(hi, -1, axis)


def synthesize(lo, hi, axis=-1):
    """Inverse of :func:`analyze`."""
    lo = np.moveaxis(np.asarray(lo, dtype=np.float64), axis, -1)
    hi = np.moveaxis(np.asarray(hi, dtype=np.float64), axis, -1)
    n = 2 * lo.shape[-1]
    idx = _indices(n)
    out = np.zeros(lo.shape[:-1] + (n,))
    for k in range(DB6_LOWPASS.size):
        # positions within one column of idx are distinct
        out[..., idx[:, k]] += DB6_LOWPASS[k] * lo + DB6_HIGHPASS[k] * hi
    return np.moveaxis(out, -1, axis)


def dwt2(image):
    """One-level 2-D transform of an even-sized array.

    Returns ``(LL, (LH, HL, HH))``; the first letter names the filter applied
    down the rows (axis 0), the second the filter along each row (axis 1).
    """
    col_lo, col_hi = analyze(image, axis=1)
    ll, hl = analyze(col_lo, axis=0)
    lh, hh = analyze(col_hi, axis=0)
    return ll, (lh, hl, hh)


def idwt2(ll, details):
    lh, hl, hh = details
    col_lo = synthesize(ll, hl, axis=0)
    col_hi = synthesize(lh, hh, axis=0)
    return synthesize(col_lo, col_hi, axis=1)
