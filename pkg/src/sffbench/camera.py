"""Thin-lens focus-stack simulator for a textured cone.

The scene is a cone seen head-on: object distance is affine in the radial
distance from the image centre, with the apex coming into focus in the
first frame of the sweep and the base in the last. Each frame is rendered
by blurring the sharp texture with a Gaussian whose width follows the
thin-lens blur circle at that pixel.
"""

import math
from dataclasses import dataclass, field, fields

import numba
import numpy as np

from .imaging import DomainError, pad_replicate
from .parallel import ordered_map

#: Below this blur width (pixels) a frame pixel is copied from the texture.
IDENTITY_SIGMA = 0.15

TEXTURES = ("stripes", "random")


@dataclass(frozen=True)
class ThinLensCamera:
    """Lens and sensor sweep, all lengths in millimetres."""

    focal_length: float = 50.0
    aperture: float = 25.0
    v_min: float = 55.0
    v_max: float = 65.0
    pixel_pitch: float = 0.08

    def __post_init__(self):
        if not 0 < self.focal_length < self.v_min <= self.v_max:
            raise DomainError("need 0 < focal_length < v_min <= v_max")
        if not (self.aperture > 0 and self.pixel_pitch > 0):
            raise DomainError("aperture and pixel_pitch must be positive")

    def sensor_positions(self, frames):
        """Sensor distances of a uniform sweep over ``[v_min, v_max]``."""
        return np.linspace(self.v_min, self.v_max, frames)


@dataclass(frozen=True)
class SimConfig:
    frames: int = 60
    size: int = 302
    texture: str = "stripes"
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.frames < 2:
            raise DomainError(f"need at least 2 frames, got {self.frames}")
        if self.size < 16:
            raise DomainError(f"size must be >= 16, got {self.size}")
        if self.texture not in TEXTURES:
            raise DomainError(f"texture must be one of {TEXTURES}, got {self.texture!r}")
        if not self.noise_sigma >= 0:
            raise DomainError("noise_sigma must be non-negative")


@dataclass(frozen=True, eq=False)
class ConeScene:
    """Per-pixel object distance, sharp texture and ground-truth frame."""

    depth: np.ndarray
    texture: np.ndarray
    gt_frame: np.ndarray
    radius: np.ndarray = field(repr=False)


def focused_depth(camera, v):
    """Object distance brought into focus at sensor distance `v`."""
    v = np.asarray(v, dtype=np.float64)
    if np.any(v <= camera.focal_length):
        raise DomainError("sensor distance must exceed the focal length")
    u = 1.0 / (1.0 / camera.focal_length - 1.0 / v)
    return float(u) if u.ndim == 0 else u


def blur_sigma(camera, u, v):
    """Gaussian blur width in pixels for object distance `u` at sensor `v`.

    The blur-circle radius ``(A/2) * v * |1/f - 1/u - 1/v|`` is converted to
    a Gaussian sigma by dividing by ``sqrt(2) * pixel_pitch``. Returns exactly
    zero when `u` equals ``focused_depth(camera, v)``.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    f = camera.focal_length
    if np.any(u <= f) or np.any(v <= f):
        raise DomainError("object and sensor distances must exceed the focal length")
    residual = 1.0 / f - 1.0 / u - 1.0 / v
    radius = 0.5 * camera.aperture * v * np.abs(residual)
    sigma = radius / (math.sqrt(2.0) * camera.pixel_pitch)
    sigma = np.where(u == focused_depth(camera, v), 0.0, sigma)
    return float(sigma) if sigma.ndim == 0 else sigma


def make_texture(config):
    n = config.size
    if config.texture == "random":
        rng = np.random.default_rng(config.seed)
        return rng.integers(0, 256, size=(n, n)).astype(np.float64)
    r = _radius_grid(n)
    # concentric rings, period 8 px
    return np.where(np.floor(r / 4.0) % 2 == 0, 64.0, 192.0)


def _radius_grid(n):
    c = n // 2
    y, x = np.mgrid[0:n, 0:n].astype(np.float64)
    return np.hypot(y - c, x - c)


def make_cone_scene(config, camera):
    """Build the cone geometry, texture and real-valued ground-truth frame.

    The apex sits on pixel ``(size // 2, size // 2)`` and the base circle has
    radius ``size // 2 - 1``; pixels outside it lie on the base plane.
    """
    n, k = config.size, config.frames
    r = _radius_grid(n)
    base_radius = n // 2 - 1
    u_apex = focused_depth(camera, camera.v_min)
    u_base = focused_depth(camera, camera.v_max)
    t = np.minimum(r / base_radius, 1.0)
    depth = u_apex + (u_base - u_apex) * t
    v_star = 1.0 / (1.0 / camera.focal_length - 1.0 / depth)
    gt = (v_star - camera.v_min) / (camera.v_max - camera.v_min) * (k - 1)
    gt = np.clip(gt, 0.0, k - 1)
    gt[t == 0.0] = 0.0
    gt[t == 1.0] = k - 1
    return ConeScene(depth=depth, texture=make_texture(config), gt_frame=gt, radius=r)


@numba.njit(cache=True, nogil=True)
def _gather_blur(padded, sigma, pad, identity_sigma):
    h, w = sigma.shape
    out = np.empty((h, w))
    g = np.empty(pad + 1)
    for y in range(h):
        for x in range(w):
            s = sigma[y, x]
            if s < identity_sigma:
                out[y, x] = padded[y + pad, x + pad]
                continue
            r = int(math.ceil(3.0 * s))
            inv = -1.0 / (2.0 * s * s)
            for i in range(r + 1):
                g[i] = math.exp(i * i * inv)
            center = padded[y + pad, x + pad]
            norm = 0.0
            acc = 0.0
            for dy in range(-r, r + 1):
                row = 0.0
                wrow = 0.0
                for dx in range(-r, r + 1):
                    wx = g[abs(dx)]
                    row += wx * (padded[y + pad + dy, x + pad + dx] - center)
                    wrow += wx
                wy = g[abs(dy)]
                acc += wy * row
                norm += wy * wrow
            # offset form keeps flat regions exactly flat
            out[y, x] = center + acc / norm
    return out


def _render_frame(texture, sigma):
    """Per-pixel Gaussian average of `texture` using that pixel's `sigma`.

    The kernel at each pixel has radius ``ceil(3 * sigma)`` and weights
    ``exp(-dx**2 / (2 sigma**2)) * exp(-dy**2 / (2 sigma**2))``, normalized
    to unit sum; pixels with ``sigma < IDENTITY_SIGMA`` keep the texture
    value. The average is accumulated as an offset from the centre pixel.
    """
    pad = int(np.ceil(3.0 * sigma.max())) if sigma.max() >= IDENTITY_SIGMA else 0
    padded = pad_replicate(texture, pad)
    return _gather_blur(padded, np.ascontiguousarray(sigma), pad, IDENTITY_SIGMA)


def render_stack(scene, camera, config):
    """Render the K-frame focus stack as a ``(K, H, W)`` float64 array."""
    positions = camera.sensor_positions(config.frames)

    def one(k):
        return _render_frame(scene.texture, blur_sigma(camera, scene.depth, positions[k]))

    stack = np.stack(ordered_map(one, range(config.frames)))
    if config.noise_sigma > 0:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(1,)))
        stack = np.clip(stack + rng.normal(0.0, config.noise_sigma, stack.shape), 0.0, 255.0)
    return stack


def manifest_items(config, camera):
    """Ordered ``(key, value)`` pairs describing a simulation run."""
    items = [(f.name, getattr(config, f.name)) for f in fields(config)]
    items += [(f.name, getattr(camera, f.name)) for f in fields(camera)]
    return items
