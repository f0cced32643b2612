"""The eight focus-measure operators and their dispatch.

Every operator maps a frame to a non-negative focus map of the same shape.
Most compute a per-pixel response and sum it over a square window;
LAPV takes the variance and HISE the entropy of the window instead.
All neighbourhood accesses replicate the border.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import dwt
from .imaging import DimensionError, DomainError, as_grid, convolve, pad_replicate, \
    window_sum, window_values

LAPLACIAN_5PT = np.array([[0.0, 1.0, 0.0],
                          [1.0, -4.0, 1.0],
                          [0.0, 1.0, 0.0]])


class OperatorKind(str, enum.Enum):
    CURV = "curv"
    GRAE = "grae"
    HISE = "hise"
    LAPM = "lapm"
    LAPV = "lapv"
    LAPD = "lapd"
    LAP3 = "lap3"
    WAVS = "wavs"

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).lower())
        except ValueError:
            tokens = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown operator {token!r}; expected one of: {tokens}") from None


#: Canonical operator order, as used for report rows.
OPERATORS = tuple(OperatorKind)


@dataclass(frozen=True)
class OperatorConfig:
    window: int = 7
    step: int = 1
    histogram_bins: int = 256
    refine: bool = False

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise DomainError(f"window must be a positive odd integer, got {self.window}")
        if self.step < 1:
            raise DomainError(f"step must be positive, got {self.step}")
        if self.histogram_bins < 1:
            raise DomainError("histogram_bins must be positive")


def _check_size(frame, min_side, name):
    frame = as_grid(frame, "frame")
    if min(frame.shape) < min_side:
        raise DimensionError(
            f"{name} needs a frame of at least {min_side}x{min_side}, got {frame.shape}")
    return frame


def _shifted(padded, pad, shape, dy, dx):
    h, w = shape
    return padded[pad + dy:pad + dy + h, pad + dx:pad + dx + w]


def grae_response(frame):
    """Squared forward differences along both axes."""
    p = pad_replicate(frame, 1)
    gx = _shifted(p, 1, frame.shape, 0, 1) - frame
    gy = _shifted(p, 1, frame.shape, 1, 0) - frame
    return gx * gx + gy * gy


def grae(frame, window=7):
    """Gradient energy."""
    frame = _check_size(frame, 3, "GRAE")
    return window_sum(grae_response(frame), window)


def modified_laplacian(frame, step=1):
    """``|2I - I(x-s) - I(x+s)| + |2I - I(y-s) - I(y+s)|`` at spacing `step`."""
    s = step
    p = pad_replicate(frame, s)
    at = lambda dy, dx: _shifted(p, s, frame.shape, dy, dx)  # noqa: E731
    return (np.abs(2.0 * frame - at(0, -s) - at(0, s))
            + np.abs(2.0 * frame - at(-s, 0) - at(s, 0)))


def lapm(frame, window=7, step=1):
    """Sum of the modified Laplacian over the window."""
    frame = _check_size(frame, 2 * step + 1, "LAPM")
    return window_sum(modified_laplacian(frame, step), window)


def diagonal_laplacian(frame, step=1):
    """Modified Laplacian plus both diagonal second differences scaled by 1/sqrt(2)."""
    s = step
    p = pad_replicate(frame, s)
    at = lambda dy, dx: _shifted(p, s, frame.shape, dy, dx)  # noqa: E731
    diag = (np.abs(2.0 * frame - at(-s, -s) - at(s, s))
            + np.abs(2.0 * frame - at(s, -s) - at(-s, s)))
    return modified_laplacian(frame, step) + diag / math.sqrt(2.0)


def lapd(frame, window=7, step=1):
    frame = _check_size(frame, 2 * step + 1, "LAPD")
    return window_sum(diagonal_laplacian(frame, step), window)


def window_variance(field, window):
    """Population variance over the window, summed in row-major window order."""
    n = window * window
    mean = window_sum(field, window) / n
    samples = window_values(field, window)
    acc = np.zeros(field.shape)
    for j in range(n):
        d = samples[..., j] - mean
        acc += d * d
    return acc / n


def lapv(frame, window=7):
    """Variance of the 5-point Laplacian over the window."""
    frame = _check_size(frame, 3, "LAPV")
    return window_variance(convolve(frame, LAPLACIAN_5PT), window)


def laplacian_3d(stack, k):
    """7-point Laplacian across space and frame index, ends clamped."""
    stack = np.asarray(stack, dtype=np.float64)
    last = stack.shape[0] - 1
    frame = stack[k]
    prev = stack[max(k - 1, 0)]
    nxt = stack[min(k + 1, last)]
    p = pad_replicate(frame, 1)
    at = lambda dy, dx: _shifted(p, 1, frame.shape, dy, dx)  # noqa: E731
    return (6.0 * frame - at(0, -1) - at(0, 1) - at(-1, 0) - at(1, 0)
            - prev - nxt)


def lap3(stack, k, window=7):
    """Energy of the 3-D Laplacian over the spatial window at frame `k`."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3 or stack.shape[0] < 1:
        raise DimensionError(f"LAP3 needs a (K, H, W) stack, got shape {stack.shape}")
    if not 0 <= k < stack.shape[0]:
        raise IndexError(f"frame index {k} out of range for {stack.shape[0]} frames")
    _check_size(stack[k], 3, "LAP3")
    r = laplacian_3d(stack, k)
    return window_sum(r * r, window)


def histogram_bin(frame, bins=256):
    """Uniform bin index over [0, 255] for each pixel."""
    idx = np.floor(np.clip(frame, 0.0, 255.0) * (bins / 255.0)).astype(np.int64)
    return np.minimum(idx, bins - 1)


def window_entropy(labels, window):
    """Shannon entropy (bits) of the label distribution in each window."""
    n = window * window
    samples = np.sort(window_values(labels, window), axis=-1)
    pos = np.arange(n)
    starts = np.ones(samples.shape, dtype=bool)
    starts[..., 1:] = samples[..., 1:] != samples[..., :-1]
    ends = np.ones(samples.shape, dtype=bool)
    ends[..., :-1] = starts[..., 1:]
    first = np.maximum.accumulate(np.where(starts, pos, 0), axis=-1)
    last = np.minimum.accumulate(np.where(ends, pos, n - 1)[..., ::-1], axis=-1)[..., ::-1]
    counts = last - first + 1
    # each sample carries -(1/n) log2(c/n) of its bin's share
    terms = -np.log2(counts / n) / n
    acc = np.zeros(labels.shape)
    for j in range(n):
        acc += terms[..., j]
    return acc


def hise(frame, window=7, bins=256):
    """Histogram entropy of the window's gray levels."""
    frame = _check_size(frame, window, "HISE")
    return window_entropy(histogram_bin(frame, bins), window)


#: Closed-form least-squares masks over the 3x3 neighbourhood for
#: ``c0 + c1*dx + c2*dy + c3*dx**2 + c4*dy**2`` (dx along columns, dy along rows).
CURVATURE_MASKS = np.array([
    [[-4, 8, -4], [8, 20, 8], [-4, 8, -4]],
    [[-6, 0, 6], [-6, 0, 6], [-6, 0, 6]],
    [[-6, -6, -6], [0, 0, 0], [6, 6, 6]],
    [[6, -12, 6], [6, -12, 6], [6, -12, 6]],
    [[6, 6, 6], [-12, -12, -12], [6, 6, 6]],
], dtype=np.float64) / 36.0


def quadratic_fit(frame):
    """Per-pixel coefficients ``(c0, c1, c2, c3, c4)`` of the 3x3 surface fit.

    The non-constant masks sum to zero, so they are applied to offsets from
    the centre pixel; flat regions then give exactly zero.
    """
    frame = np.asarray(frame, dtype=np.float64)
    p = pad_replicate(frame, 1)
    h, w = frame.shape
    coeffs = np.zeros((5, h, w))
    for dy in range(3):
        for dx in range(3):
            sample = p[dy:dy + h, dx:dx + w]
            coeffs[0] += CURVATURE_MASKS[0, dy, dx] * sample
            diff = sample - frame
            for i in range(1, 5):
                weight = CURVATURE_MASKS[i, dy, dx]
                if weight != 0.0:
                    coeffs[i] += weight * diff
    return coeffs


def curv(frame, window=7):
    """Sum of absolute non-constant coefficients of a local quadratic fit."""
    frame = _check_size(frame, 3, "CURV")
    c = quadratic_fit(frame)
    response = np.abs(c[1]) + np.abs(c[2]) + np.abs(c[3]) + np.abs(c[4])
    return window_sum(response, window)


def wavelet_detail_energy(frame):
    """``|LH| + |HL| + |HH|`` upsampled back to the frame grid.

    Odd sides are extended by one replicated row/column before the
    transform; the upsampled map is cropped back.
    """
    h, w = frame.shape
    even = np.pad(frame, ((0, h % 2), (0, w % 2)), mode="edge")
    _, (lh, hl, hh) = dwt.dwt2(even)
    detail = np.abs(lh) + np.abs(hl) + np.abs(hh)
    return np.repeat(np.repeat(detail, 2, axis=0), 2, axis=1)[:h, :w]


def wavs(frame, window=7):
    """Window sum of first-level db6 detail magnitudes."""
    frame = _check_size(frame, 16, "WAVS")
    return window_sum(wavelet_detail_energy(frame), window)


def focus_map(stack, k, kind, config=None):
    """Focus map of frame `k` of a ``(K, H, W)`` stack for operator `kind`."""
    cfg = config or OperatorConfig()
    kind = OperatorKind.parse(kind)
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3:
        raise DimensionError(f"stack must be (K, H, W), got shape {stack.shape}")
    if not 0 <= k < stack.shape[0]:
        raise IndexError(f"frame index {k} out of range for {stack.shape[0]} frames")
    if kind is OperatorKind.LAP3:
        return lap3(stack, k, cfg.window)
    frame = stack[k]
    if kind is OperatorKind.GRAE:
        return grae(frame, cfg.window)
    if kind is OperatorKind.LAPM:
        return lapm(frame, cfg.window, cfg.step)
    if kind is OperatorKind.LAPD:
        return lapd(frame, cfg.window, cfg.step)
    if kind is OperatorKind.LAPV:
        return lapv(frame, cfg.window)
    if kind is OperatorKind.HISE:
        return hise(frame, cfg.window, cfg.histogram_bins)
    if kind is OperatorKind.CURV:
        return curv(frame, cfg.window)
    return wavs(frame, cfg.window)
