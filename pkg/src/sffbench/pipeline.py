"""Focus volume, depth extraction and all-in-focus composition."""

import numpy as np

from .focus import OperatorConfig, focus_map
from .imaging import DimensionError, DomainError, grid_to_gray


def as_stack(stack):
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3:
        raise DimensionError(f"stack must be (K, H, W), got shape {stack.shape}")
    return stack


def stack_frames(frames):
    """Stack a sequence of equally sized 2-D frames, rejecting ragged input."""
    frames = [np.asarray(f, dtype=np.float64) for f in frames]
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise DimensionError(f"frames differ in shape: {sorted(shapes)}")
    return np.stack(frames)


def build_focus_volume(stack, kind, config=None):
    """``(K, H, W)`` focus measures, one map per frame."""
    stack = as_stack(stack)
    if stack.shape[0] < 2:
        raise DimensionError("a focus volume needs at least two frames")
    return np.stack([focus_map(stack, k, kind, config) for k in range(stack.shape[0])])


def depth_from_volume(volume, refine=False):
    """Per-pixel frame of maximum focus.

    Ties go to the lowest frame index. With `refine`, interior maxima with
    a concave 3-point neighbourhood are moved to the parabola vertex,
    clamped to one frame either side.
    """
    volume = as_stack(volume)
    k_count = volume.shape[0]
    if k_count < 2:
        raise DimensionError("need at least two frames")
    best = np.argmax(volume, axis=0)
    depth = best.astype(np.float64)
    if not refine:
        return depth
    inner = (best > 0) & (best < k_count - 1)
    kb = np.clip(best, 1, k_count - 2)
    rows, cols = np.indices(best.shape)
    left = volume[kb - 1, rows, cols]
    mid = volume[kb, rows, cols]
    right = volume[kb + 1, rows, cols]
    curvature = left - 2.0 * mid + right
    ok = inner & (curvature < 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = (left - right) / (2.0 * curvature)
    offset = np.clip(np.where(ok, offset, 0.0), -1.0, 1.0)
    return depth + offset


def all_in_focus(stack, depth):
    """Take each pixel from the frame nearest its depth (half-to-even)."""
    stack = as_stack(stack)
    depth = np.asarray(depth, dtype=np.float64)
    if depth.shape != stack.shape[1:]:
        raise DimensionError(f"depth shape {depth.shape} does not match frames {stack.shape[1:]}")
    k = np.clip(np.rint(depth), 0, stack.shape[0] - 1).astype(np.int64)
    rows, cols = np.indices(depth.shape)
    return stack[k, rows, cols]


def depth_to_gray(depth, frames):
    if frames < 2:
        raise DomainError("need at least two frames")
    return grid_to_gray(depth, 0.0, frames - 1.0)


def reconstruct(stack, kind, config=None):
    """Run the full pipeline; returns ``(depth, all_in_focus)``."""
    cfg = config or OperatorConfig()
    volume = build_focus_volume(stack, kind, cfg)
    depth = depth_from_volume(volume, cfg.refine)
    return depth, all_in_focus(stack, depth)
