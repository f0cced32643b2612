"""Image containers, replicate-border filtering and gray-level rendering.

Images and float grids are plain 2-D ``numpy.float64`` arrays indexed
``[row, col]``. An *image* holds gray levels in ``[0, 255]``; a *float grid*
is unbounded (depth maps, focus maps).
"""

import math

import numpy as np


class DimensionError(ValueError):
    """Array shapes are incompatible with the requested operation."""


class DomainError(ValueError):
    """A scalar argument lies outside the domain of the function."""


def as_grid(values, name="grid"):
    """Return `values` as a finite 2-D float64 array (copying if needed)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_image(values, name="image"):
    """Like :func:`as_grid` but also requires gray levels in [0, 255]."""
    arr = as_grid(values, name)
    if arr.min() < 0.0 or arr.max() > 255.0:
        raise ValueError(f"{name} has values outside [0, 255]")
    return arr


def pad_replicate(grid, radius):
    """Clamp-to-edge extension by `radius` pixels on every side."""
    if radius == 0:
        return np.asarray(grid, dtype=np.float64)
    return np.pad(grid, radius, mode="edge")


def window_sum(field, window):
    """Sum `field` over a ``window x window`` neighbourhood, replicate borders.

    Offsets are accumulated in row-major order starting from zero, so the
    result is bitwise reproducible by a plain nested loop that adds the
    window samples in the same order.
    """
    field = np.asarray(field, dtype=np.float64)
    if window < 1 or window % 2 == 0:
        raise DomainError(f"window must be a positive odd integer, got {window}")
    r = window // 2
    h, w = field.shape
    padded = pad_replicate(field, r)
    out = np.zeros((h, w))
    for dy in range(window):
        for dx in range(window):
            out += padded[dy:dy + h, dx:dx + w]
    return out


def window_values(field, window):
    """Stack the ``window**2`` neighbourhood samples along a trailing axis.

    The trailing axis is ordered row-major over the window. Borders are
    replicated.
    """
    r = window // 2
    padded = pad_replicate(np.asarray(field, dtype=np.float64), r)
    view = np.lib.stride_tricks.sliding_window_view(padded, (window, window))
    return view.reshape(field.shape[0], field.shape[1], window * window)


def convolve(grid, kernel):
    """Dense correlation of `grid` with a square odd-sized `kernel`.

    Borders are replicated; the output has the shape of the input. Kernel
    taps are accumulated in row-major order.
    """
    grid = as_grid(grid)
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1] or kernel.shape[0] % 2 == 0:
        raise DimensionError(f"kernel must be square with odd side, got {kernel.shape}")
    r = kernel.shape[0] // 2
    h, w = grid.shape
    if r >= min(h, w):
        raise DimensionError(f"kernel radius {r} too large for a {h}x{w} grid")
    padded = pad_replicate(grid, r)
    out = np.zeros((h, w))
    for dy in range(2 * r + 1):
        for dx in range(2 * r + 1):
            weight = kernel[dy, dx]
            if weight != 0.0:
                out += weight * padded[dy:dy + h, dx:dx + w]
    return out


def gaussian_kernel(sigma):
    """Normalized square Gaussian kernel with radius ``ceil(3 * sigma)``."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    r = math.ceil(3.0 * sigma)
    x = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2) / (2.0 * sigma * sigma))
    return g / g.sum()


def gaussian_blur(grid, sigma):
    """Blur with :func:`gaussian_kernel`; ``sigma == 0`` returns a copy.

    Evaluated as ``x + K * (x_shifted - x)``, which equals ``K * x`` for a
    unit-sum kernel and keeps constant regions exactly constant.
    """
    grid = as_grid(grid)
    if sigma == 0:
        return grid.copy()
    kernel = gaussian_kernel(sigma)
    r = kernel.shape[0] // 2
    h, w = grid.shape
    if r >= min(h, w):
        raise DimensionError(f"kernel radius {r} too large for a {h}x{w} grid")
    padded = pad_replicate(grid, r)
    acc = np.zeros((h, w))
    for dy in range(2 * r + 1):
        for dx in range(2 * r + 1):
            acc += kernel[dy, dx] * (padded[dy:dy + h, dx:dx + w] - grid)
    return grid + acc


def grid_to_gray(grid, lo, hi):
    """Map ``[lo, hi]`` affinely onto ``[0, 255]``, clamping outside values."""
    if not hi > lo:
        raise DomainError(f"need hi > lo, got lo={lo}, hi={hi}")
    grid = as_grid(grid)
    return np.clip((grid - lo) * 255.0 / (hi - lo), 0.0, 255.0)
