"""Shared image generators for the test suite.

Everything is seeded: a test that passes once passes always.
"""

from __future__ import annotations

import numpy as np
import pytest

from freqmerge import ImagePlane, read_pgm, write_pgm


def random_plane(rng: np.random.Generator, rows: int, cols: int) -> ImagePlane:
    return ImagePlane(rng.random((rows, cols)))


def natural_image(seed: int, size: int = 256) -> ImagePlane:
    """Synthetic natural-looking scene: gradient, soft blobs, texture, noise.

    Stands in for photographic content: a dense spectrum with widely
    spread coefficient magnitudes and no large tie classes.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.meshgrid(
        np.linspace(0.0, 1.0, size), np.linspace(0.0, 1.0, size), indexing="ij"
    )
    img = 0.15 + 0.30 * xx + 0.20 * yy
    for _ in range(12):
        cx, cy = rng.random(2)
        spread = 0.03 + 0.12 * rng.random()
        amp = rng.uniform(-0.35, 0.5)
        img += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * spread**2))
    img += 0.05 * np.sin(2 * np.pi * (7 * xx + 3 * yy))
    img += 0.02 * rng.standard_normal((size, size))
    img -= img.min()
    img /= img.max()
    return ImagePlane(img)


def object_image(kind: str, size: int = 64) -> ImagePlane:
    """White object on black background; 'disk' and 'box' do not overlap."""
    yy, xx = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    img = np.zeros((size, size))
    if kind == "disk":
        cy, cx, r = size * 0.3, size * 0.3, size * 0.15
        img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = 1.0
    elif kind == "box":
        r0, r1 = int(size * 0.6), int(size * 0.85)
        c0, c1 = int(size * 0.55), int(size * 0.9)
        img[r0:r1, c0:c1] = 1.0
    else:
        raise ValueError(kind)
    return ImagePlane(img)


def quantized_pair_odd_peak(seed: int, size: int = 32) -> tuple[bytes, bytes]:
    """Two random 8-bit PGMs whose per-pixel sum peaks at an odd level.

    An odd peak keeps round-half-up quantization after divide-by-max off
    exact .5 boundaries, so the spatial and spectral merge pipelines
    quantize identically despite transform rounding noise.
    """
    attempt = 0
    while True:
        rng = np.random.default_rng(seed + 1000 * attempt)
        a = np.floor(np.clip(rng.random((size, size)), 0, 1) * 255 + 0.5).astype(int)
        b = np.floor(np.clip(rng.random((size, size)), 0, 1) * 255 + 0.5).astype(int)
        if int((a + b).max()) % 2 == 1:
            break
        attempt += 1
    pa = write_pgm(ImagePlane(a / 255.0))
    pb = write_pgm(ImagePlane(b / 255.0))
    # paranoia: the PGM round trip must preserve the quantized levels
    assert np.array_equal(np.floor(read_pgm(pa).pixels * 255 + 0.5), a)
    return pa, pb


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
