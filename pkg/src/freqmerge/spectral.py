"""2D discrete Fourier transforms with a slow direct-sum oracle path.

Conventions used throughout the package:

- forward transform carries no scale factor, the inverse carries 1/n per
  axis, so inverse(forward(x)) == x,
- ``u`` indexes rows (length R), ``v`` indexes columns (length C),
- spectra are stored with the DC coefficient at index (0, 0) unless the
  ``shifted`` flag says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ImagePlane",
    "Spectrum",
    "dft1d_direct",
    "fft1d",
    "forward2d",
    "inverse2d",
    "shift_center",
    "energy",
]


def _frozen_copy(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ImagePlane:
    """Real-valued R x C grid of intensities, nominally in [0, 1].

    Values outside [0, 1] are legal (pre-normalization merge sums, inverse
    transforms with ringing); only finiteness is enforced here. Codec and
    merge layers own the range policies.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image plane must be a non-empty 2D grid")
        if not np.all(np.isfinite(px)):
            raise ValueError("image samples must all be finite")
        object.__setattr__(self, "pixels", _frozen_copy(px))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Dense complex coefficient grid over spectral indices (u, v).

    ``shifted`` is False when DC sits at (0, 0) and True when the quadrants
    have been swapped for display (DC at (R//2, C//2)).
    """

    coeffs: np.ndarray
    shifted: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("spectrum must be a non-empty 2D grid")
        if not np.all(np.isfinite(c)):
            raise ValueError("spectrum coefficients must all be finite")
        object.__setattr__(self, "coeffs", _frozen_copy(c))

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape


def _as_signal(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("signal must be a non-empty 1D sequence")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal values must all be finite")
    return x


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@lru_cache(maxsize=64)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=128)
def _twiddles(size: int, inverse: bool) -> np.ndarray:
    sign = 2j if inverse else -2j
    tw = np.exp(sign * np.pi * np.arange(size // 2) / size)
    tw.setflags(write=False)
    return tw


def _fft_pow2(block: np.ndarray, inverse: bool) -> np.ndarray:
    """Iterative radix-2 decimation-in-time over the last axis.

    Elementwise numpy ops only, so results do not depend on BLAS thread
    counts.
    """
    n = block.shape[-1]
    y = np.ascontiguousarray(block[..., _bit_reversal(n)])
    size = 2
    while size <= n:
        half = size // 2
        tw = _twiddles(size, inverse)
        grouped = y.reshape(y.shape[:-1] + (n // size, size))
        top = grouped[..., :half]
        spun = grouped[..., half:] * tw
        upper = top + spun
        lower = top - spun
        grouped[..., :half] = upper
        grouped[..., half:] = lower
        size *= 2
    if inverse:
        y /= n
    return y


def _dft_direct(block: np.ndarray, inverse: bool) -> np.ndarray:
    """O(n^2) evaluation of the transform sum over the last axis.

    einsum with optimize=False keeps a fixed summation order independent
    of the BLAS backend, which the CLI determinism contract relies on.
    """
    n = block.shape[-1]
    m = np.arange(n, dtype=np.float64)
    sign = 2.0 if inverse else -2.0
    kernel = np.exp(sign * 1j * np.pi * np.outer(m, m) / n)
    out = np.einsum("...m,mk->...k", block, kernel, optimize=False)
    if inverse:
        out /= n
    return out


def dft1d_direct(signal, inverse: bool = False) -> np.ndarray:
    """Direct double-precision DFT: X[k] = sum_m x[m] exp(-j2pi km/n).

    The inverse applies the +j kernel and the 1/n scale. Quadratic cost;
    kept as the oracle the fast path is checked against.
    """
    return _dft_direct(_as_signal(signal), inverse)


def fft1d(signal, inverse: bool = False) -> np.ndarray:
    """Fast 1D transform, same contract as :func:`dft1d_direct`.

    Radix-2 decimation in time when the length is a power of two; any
    other length delegates to the direct sum, so the fallback is bitwise
    identical to the oracle.
    """
    x = _as_signal(signal)
    if _is_pow2(x.size):
        return _fft_pow2(x, inverse)
    return _dft_direct(x, inverse)


def _transform_axis(block: np.ndarray, axis: int, inverse: bool) -> np.ndarray:
    moved = np.moveaxis(block, axis, -1)
    n = moved.shape[-1]
    if _is_pow2(n):
        out = _fft_pow2(moved, inverse)
    else:
        out = _dft_direct(moved, inverse)
    return np.moveaxis(out, -1, axis)


def forward2d(plane: ImagePlane) -> Spectrum:
    """Forward 2D transform by row-column decomposition.

    I(u, v) = sum_x sum_y i(x, y) exp[-j2pi(ux/R + vy/C)]: every row is
    transformed first (the v axis), then every column (the u axis).
    """
    data = plane.pixels.astype(np.complex128)
    data = _transform_axis(data, axis=1, inverse=False)
    data = _transform_axis(data, axis=0, inverse=False)
    return Spectrum(data, shifted=False)


def inverse2d(spec: Spectrum, imag_tol: float | None = None) -> ImagePlane:
    """Inverse 2D transform, returning the real part unclamped.

    i(x, y) = (1/(R*C)) sum_u sum_v I(u, v) exp[+j2pi(ux/R + vy/C)].
    The imaginary residue is discarded; pass ``imag_tol`` to fail loudly
    when it exceeds a bound (magnitude-thresholded spectra of real images
    stay Hermitian, so their residue is numerical noise).
    """
    if spec.shifted:
        raise ValueError("spectrum is display-shifted; unshift before inverting")
    data = _transform_axis(spec.coeffs, axis=1, inverse=True)
    data = _transform_axis(data, axis=0, inverse=True)
    if imag_tol is not None:
        residue = float(np.max(np.abs(data.imag)))
        if residue > imag_tol:
            raise ValueError(
                f"imaginary residue {residue:.3e} exceeds tolerance {imag_tol:.3e}"
            )
    return ImagePlane(data.real)


def shift_center(spec: Spectrum) -> Spectrum:
    """Swap quadrants so DC moves between (0, 0) and (R//2, C//2).

    Involutive for even dimensions; the shifted flag toggles either way.
    """
    r, c = spec.shape
    rolled = np.roll(spec.coeffs, (r // 2, c // 2), axis=(0, 1))
    return Spectrum(rolled, shifted=not spec.shifted)


def energy(value: ImagePlane | Spectrum) -> float:
    """Signal energy: sum |i|^2 spatially, (1/(R*C)) sum |I|^2 spectrally.

    The two agree (Parseval) for a plane and its forward transform.
    """
    if isinstance(value, ImagePlane):
        px = value.pixels
        return float(np.sum(px * px))
    if isinstance(value, Spectrum):
        c = value.coeffs
        total = float(np.sum(c.real * c.real + c.imag * c.imag))
        return total / (value.rows * value.cols)
    raise TypeError(f"expected ImagePlane or Spectrum, got {type(value).__name__}")
