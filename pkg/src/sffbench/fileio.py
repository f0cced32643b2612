"""Binary PGM (P5, 8-bit) and SFFD float-grid readers and writers."""

import os
import struct
import tempfile

import numpy as np

from .imaging import as_grid

SFFD_MAGIC = b"SFFD"


class FormatError(ValueError):
    """A file does not follow the expected layout."""


class UnsupportedError(FormatError):
    """A well-formed file uses a feature this reader does not handle."""


class PayloadLengthError(FormatError):
    """The payload is shorter (or longer) than the header announces."""


def atomic_write(path, data):
    """Write `data` to `path` through a temporary file and a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header_tokens(data):
    """Yield (token, end_offset) for the first four PGM header tokens."""
    pos = 0
    n = len(data)
    found = 0
    while found < 4:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        found += 1
        yield data[start:pos], pos


def decode_pgm(data):
    """Decode the bytes of a P5 file into a float64 image."""
    tokens = []
    end = 0
    for tok, end in _header_tokens(data):
        tokens.append(tok)
        if len(tokens) == 1 and tok != b"P5":
            raise FormatError(f"not a binary PGM (magic {tok[:2]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"malformed PGM header: {exc}") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"invalid PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedError(f"only maxval 255 is supported, got {maxval}")
    if end >= len(data) or not data[end:end + 1].isspace():
        raise FormatError("missing whitespace after PGM maxval")
    payload = data[end + 1:]
    if len(payload) != width * height:
        raise PayloadLengthError(
            f"expected {width * height} payload bytes, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).astype(np.float64)


def load_pgm(path):
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def encode_pgm(image):
    """Encode an image with values in [0, 255] as P5 bytes.

    Values are rounded half-to-even. Out-of-range values raise ``ValueError``
    instead of being clamped.
    """
    image = as_grid(image, "image")
    if image.min() < 0.0 or image.max() > 255.0:
        raise ValueError("pixel values outside [0, 255]; clamp before saving")
    h, w = image.shape
    payload = np.rint(image).astype(np.uint8).tobytes()
    return f"P5\n{w} {h}\n255\n".encode("ascii") + payload


def save_pgm(image, path):
    atomic_write(path, encode_pgm(image))


def encode_float_grid(grid):
    grid = as_grid(grid)
    h, w = grid.shape
    return SFFD_MAGIC + struct.pack("<II", w, h) + grid.astype("<f8").tobytes()


def decode_float_grid(data):
    if len(data) < 12 or data[:4] != SFFD_MAGIC:
        raise FormatError("not an SFFD file")
    w, h = struct.unpack("<II", data[4:12])
    if w == 0 or h == 0:
        raise FormatError(f"invalid SFFD dimensions {w}x{h}")
    if len(data) != 12 + 8 * w * h:
        raise FormatError(f"SFFD size mismatch: {len(data)} bytes for {w}x{h}")
    grid = np.frombuffer(data, dtype="<f8", offset=12).reshape(h, w).astype(np.float64)
    if not np.all(np.isfinite(grid)):
        raise FormatError("SFFD contains non-finite values")
    return grid


def save_float_grid(grid, path):
    atomic_write(path, encode_float_grid(grid))


def load_float_grid(path):
    with open(path, "rb") as fh:
        return decode_float_grid(fh.read())
