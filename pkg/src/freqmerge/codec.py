"""Grayscale PGM I/O, size alignment, and spectrum magnitude rendering.

PGM is the only raster format: binary P5 and ASCII P2 are read, P5 is
written. Samples are normalized to [0, 1] on read (raw / maxval) and
quantized with round-half-up on write, so an 8-bit read -> write -> read
round trip is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .spectral import ImagePlane, Spectrum, shift_center

__all__ = [
    "AlignMode",
    "AlignmentPolicy",
    "PgmParseError",
    "PgmTruncatedError",
    "read_pgm",
    "write_pgm",
    "align",
    "magnitude_image",
    "spectrum_heatmap",
]

_WHITESPACE = b" \t\n\r\x0b\x0c"


class PgmParseError(ValueError):
    """Malformed PGM content; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PgmTruncatedError(PgmParseError):
    """Sample data shorter (or longer) than the header promises."""


class AlignMode(str, Enum):
    center_pad = "center_pad"
    topleft_pad = "topleft_pad"


@dataclass(frozen=True)
class AlignmentPolicy:
    """How to embed images into the common grid before merging."""

    mode: AlignMode = AlignMode.center_pad
    pad_value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", AlignMode(self.mode))
        if not (0.0 <= self.pad_value <= 1.0):
            raise ValueError("pad_value must lie in [0, 1]")


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    n = len(data)
    while pos < n:
        b = data[pos : pos + 1]
        if b in (b" ", b"\t", b"\n", b"\r", b"\x0b", b"\x0c"):
            pos += 1
        elif b == b"#":
            nl = data.find(b"\n", pos)
            pos = n if nl < 0 else nl + 1
        else:
            break
    return pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos : pos + 1].isdigit():
        pos += 1
    if pos == start:
        raise PgmParseError(f"expected {what}", start)
    return int(data[start:pos]), pos


def read_pgm(data: bytes) -> ImagePlane:
    """Decode binary (P5) or ASCII (P2) PGM bytes into a [0, 1] plane."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise TypeError("read_pgm expects a byte sequence")
    data = bytes(data)
    if len(data) < 2:
        raise PgmParseError("missing PGM magic", 0)
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmParseError(f"unsupported magic {magic!r}", 0)

    pos = 2
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval, pos = _read_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmParseError(f"bad dimensions {width}x{height}", pos)
    if not (1 <= maxval <= 65535):
        raise PgmParseError(f"maxval {maxval} outside [1, 65535]", pos)

    count = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos : pos + 1] not in (
            b" ", b"\t", b"\n", b"\r", b"\x0b", b"\x0c",
        ):
            raise PgmParseError("expected single whitespace before raster", pos)
        pos += 1
        per_sample = 1 if maxval < 256 else 2
        expected = count * per_sample
        actual = len(data) - pos
        if actual != expected:
            raise PgmTruncatedError(
                f"raster holds {actual} bytes, expected {expected}", pos
            )
        dtype = np.uint8 if per_sample == 1 else np.dtype(">u2")
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        raw = raw.astype(np.int64)
    else:
        values = []
        while True:
            pos = _skip_space_and_comments(data, pos)
            if pos >= len(data):
                break
            value, pos = _read_int(data, pos, "sample value")
            values.append(value)
        if len(values) != count:
            raise PgmTruncatedError(
                f"raster holds {len(values)} samples, expected {count}", pos
            )
        raw = np.asarray(values, dtype=np.int64)

    if raw.size and int(raw.max()) > maxval:
        where = int(np.argmax(raw > maxval))
        raise PgmParseError(f"sample {int(raw[where])} exceeds maxval {maxval}", pos)
    samples = raw.reshape(height, width) / float(maxval)
    return ImagePlane(samples)


def write_pgm(plane: ImagePlane, maxval: int = 255) -> bytes:
    """Encode a plane as binary P5, clamping to [0, 1] and rounding half up."""
    if maxval not in (255, 65535):
        raise ValueError("maxval must be 255 or 65535")
    clipped = np.clip(plane.pixels, 0.0, 1.0)
    quantized = np.floor(clipped * maxval + 0.5).astype(np.int64)
    header = b"P5\n%d %d\n%d\n" % (plane.cols, plane.rows, maxval)
    if maxval == 255:
        body = quantized.astype(np.uint8).tobytes()
    else:
        body = quantized.astype(">u2").tobytes()
    return header + body


def align(planes: list[ImagePlane], policy: AlignmentPolicy | None = None) -> list[ImagePlane]:
    """Embed all planes into the per-axis maximum grid, padding per policy.

    Planes already at the target size are returned untouched; embedded
    samples are never altered.
    """
    if not planes:
        raise ValueError("align requires at least one plane")
    policy = policy or AlignmentPolicy()
    rows = max(p.rows for p in planes)
    cols = max(p.cols for p in planes)

    out = []
    for plane in planes:
        if plane.shape == (rows, cols):
            out.append(plane)
            continue
        grid = np.full((rows, cols), policy.pad_value, dtype=np.float64)
        if policy.mode is AlignMode.center_pad:
            r0 = (rows - plane.rows) // 2
            c0 = (cols - plane.cols) // 2
        else:
            r0, c0 = 0, 0
        grid[r0 : r0 + plane.rows, c0 : c0 + plane.cols] = plane.pixels
        out.append(ImagePlane(grid))
    return out


def magnitude_image(spec: Spectrum, shift: bool = True, log: bool = True) -> ImagePlane:
    """Coefficient magnitudes rescaled linearly to [0, 1] for display.

    ``shift`` centers DC first (no-op if already shifted), ``log`` applies
    log(1 + |I|). A flat magnitude grid maps to all zeros.
    """
    if shift and not spec.shifted:
        spec = shift_center(spec)
    mag = np.abs(spec.coeffs)
    if log:
        mag = np.log1p(mag)
    lo = float(mag.min())
    hi = float(mag.max())
    if hi <= lo:
        return ImagePlane(np.zeros(spec.shape))
    return ImagePlane((mag - lo) / (hi - lo))


def spectrum_heatmap(spec: Spectrum) -> ImagePlane:
    """Log-magnitude display image of a spectrum with DC centered."""
    return magnitude_image(spec, shift=True, log=True)
