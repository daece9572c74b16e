"""Spatial and spectral image merging with magnitude thresholding.

The spatial merge adds aligned intensities. The spectral merge integrates
per-image spectra scaled by prominence coefficients, optionally removes
coefficients whose magnitude falls below a threshold T = x * max|coef|,
and inverse-transforms the retained set. Thresholding is the data
reduction step: the retained coefficients form the sparse spectrum that
:mod:`freqmerge.sparse` persists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .codec import AlignmentPolicy, align
from .jsonio import dumps_canonical
from .spectral import ImagePlane, Spectrum, forward2d, inverse2d

__all__ = [
    "Renorm",
    "MergeConfig",
    "ReductionReport",
    "SparseSpectrum",
    "SpectralMergeResult",
    "RatioThreshold",
    "merge_spatial",
    "integrate_spectra",
    "merge_spectral",
    "merge_to_ratio",
    "apply_threshold",
    "threshold_for_ratio",
    "psnr",
]

# Residue bound asserted when inverting thresholded spectra; magnitude
# thresholding keeps Hermitian pairs together, so anything above this is
# a logic error rather than rounding noise.
_IMAG_RESIDUE_TOL = 1e-6


class Renorm(str, Enum):
    """How merge sums are mapped back toward [0, 1]."""

    divide_by_max = "divide_by_max"
    clamp = "clamp"


@dataclass(frozen=True)
class MergeConfig:
    """Knobs shared by both merge routes.

    ``coefficients`` are the per-image prominence weights used by the
    spectral merge (None means all ones). ``threshold_fraction`` is the x
    in T = x * max|coef|; 0 disables removal.
    """

    coefficients: tuple[float, ...] | None = None
    threshold_fraction: float = 0.0
    spatial_renorm: Renorm = Renorm.divide_by_max
    alignment: AlignmentPolicy = AlignmentPolicy()

    def __post_init__(self):
        if self.coefficients is not None:
            coeffs = tuple(float(c) for c in self.coefficients)
            if not all(math.isfinite(c) for c in coeffs):
                raise ValueError("prominence coefficients must be finite")
            object.__setattr__(self, "coefficients", coeffs)
        if not (0.0 <= self.threshold_fraction < 1.0):
            raise ValueError("threshold_fraction must lie in [0, 1)")
        object.__setattr__(self, "spatial_renorm", Renorm(self.spatial_renorm))

    def resolved_coefficients(self, n_images: int) -> tuple[float, ...]:
        if self.coefficients is None:
            return (1.0,) * n_images
        if len(self.coefficients) != n_images:
            raise ValueError(
                f"got {len(self.coefficients)} prominence coefficients "
                f"for {n_images} images"
            )
        return self.coefficients


@dataclass(frozen=True)
class ReductionReport:
    """Accounting for one thresholding pass.

    ``reduction_ratio`` is total/retained coefficient counts.
    ``removed_energy`` is the spectral energy of the removed coefficients,
    sum |coef|^2 / (R*C), which equals R*C times the MSE the removal
    introduces in the (pre-renormalization) merged plane.
    ``threshold_fraction`` and ``psnr_vs_full_db`` are None on partial
    reports produced from a bare threshold value.
    """

    total_units: int
    retained_units: int
    reduction_ratio: float
    threshold_value: float
    threshold_fraction: float | None
    removed_energy: float
    psnr_vs_full_db: float | None

    def __post_init__(self):
        if self.total_units < 1:
            raise ValueError("total_units must be positive")
        if not (0 <= self.retained_units <= self.total_units):
            raise ValueError("retained_units must lie in [0, total_units]")
        if self.threshold_value < 0:
            raise ValueError("threshold_value must be non-negative")
        if self.removed_energy < 0:
            raise ValueError("removed_energy must be non-negative")
        if self.threshold_fraction is not None and not (
            0.0 <= self.threshold_fraction < 1.0
        ):
            raise ValueError("threshold_fraction must lie in [0, 1)")

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, 17-significant-digit floats.

        Non-finite values (the infinite PSNR of a lossless pass) serialize
        as null; JSON has no Infinity literal.
        """
        return dumps_canonical(
            {
                "total_units": self.total_units,
                "retained_units": self.retained_units,
                "reduction_ratio": self.reduction_ratio,
                "threshold_value": self.threshold_value,
                "threshold_fraction": self.threshold_fraction,
                "removed_energy": self.removed_energy,
                "psnr_vs_full_db": self.psnr_vs_full_db,
            }
        )


@dataclass(frozen=True, eq=False)
class SparseSpectrum:
    """Retained spectrum coefficients plus the dimensions they came from.

    Entries are kept in ascending (u, v) order as parallel arrays; the
    binary codec in :mod:`freqmerge.sparse` serializes them verbatim.
    """

    rows: int
    cols: int
    total_units: int
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("spectrum dimensions must be positive")
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.complex128)
        if not (u.ndim == v.ndim == values.ndim == 1):
            raise ValueError("entry columns must be 1D arrays")
        if not (u.size == v.size == values.size):
            raise ValueError("entry columns must share one length")
        if self.total_units < max(1, u.size):
            raise ValueError("total_units must cover the entry count")
        if u.size:
            if u.min() < 0 or u.max() >= self.rows:
                raise ValueError("entry u index out of range")
            if v.min() < 0 or v.max() >= self.cols:
                raise ValueError("entry v index out of range")
            keys = u.astype(np.uint64) * np.uint64(self.cols) + v.astype(np.uint64)
            if np.any(keys[1:] <= keys[:-1]):
                raise ValueError("entries must be strictly ascending by (u, v)")
        if not np.all(np.isfinite(values)):
            raise ValueError("entry values must be finite")
        for name, arr in (("u", u), ("v", v), ("values", values)):
            arr = np.array(arr, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def entry_count(self) -> int:
        return int(self.u.size)

    def entries(self) -> list[tuple[int, int, float, float]]:
        """Entry tuples (u, v, re, im), ascending by (u, v)."""
        return [
            (int(uu), int(vv), float(val.real), float(val.imag))
            for uu, vv, val in zip(self.u, self.v, self.values)
        ]


class SpectralMergeResult(NamedTuple):
    merged: ImagePlane
    sparse: SparseSpectrum
    report: ReductionReport


class RatioThreshold(NamedTuple):
    threshold: float
    achieved_ratio: float
    retained_units: int


def _require_planes(planes: Sequence[ImagePlane]) -> list[ImagePlane]:
    planes = list(planes)
    if not planes:
        raise ValueError("merge requires at least one image")
    return planes


def _renormalize(raw: np.ndarray, mode: Renorm) -> np.ndarray:
    if mode is Renorm.divide_by_max:
        peak = float(raw.max())
        return raw / peak if peak > 1.0 else raw
    return np.clip(raw, 0.0, 1.0)


def merge_spatial(planes: Sequence[ImagePlane], config: MergeConfig | None = None) -> ImagePlane:
    """Intensity-domain merge: align, add, renormalize.

    The sum is unweighted; prominence coefficients only act on the
    spectral route. A provided coefficient list is still checked against
    the image count so both routes share one config contract.
    """
    planes = _require_planes(planes)
    config = config or MergeConfig()
    config.resolved_coefficients(len(planes))
    aligned = align(planes, config.alignment)
    raw = np.zeros(aligned[0].shape, dtype=np.float64)
    for plane in aligned:
        raw += plane.pixels
    return ImagePlane(_renormalize(raw, config.spatial_renorm))


def integrate_spectra(
    planes: Sequence[ImagePlane],
    coefficients: Sequence[float] | None = None,
    alignment: AlignmentPolicy | None = None,
) -> Spectrum:
    """Coefficient-weighted sum of the per-image forward transforms."""
    planes = _require_planes(planes)
    if coefficients is None:
        coefficients = [1.0] * len(planes)
    if len(coefficients) != len(planes):
        raise ValueError(
            f"got {len(coefficients)} prominence coefficients for {len(planes)} images"
        )
    aligned = align(planes, alignment or AlignmentPolicy())
    acc = np.zeros(aligned[0].shape, dtype=np.complex128)
    for weight, plane in zip(coefficients, aligned):
        acc += float(weight) * forward2d(plane).coeffs
    return Spectrum(acc, shifted=False)


def apply_threshold(spec: Spectrum, threshold: float) -> tuple[SparseSpectrum, ReductionReport]:
    """Drop coefficients with |coef| < threshold (strictly below).

    Returns the retained entries and a partial report; threshold_fraction
    and PSNR need the full merge context and stay None here.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if spec.shifted:
        raise ValueError("spectrum is display-shifted; unshift before thresholding")
    mag = np.abs(spec.coeffs)
    keep = mag >= threshold
    uu, vv = np.nonzero(keep)  # row-major scan, already ascending by (u, v)
    values = spec.coeffs[keep]
    rows, cols = spec.shape
    total = rows * cols
    retained = int(values.size)
    removed_sq = mag[~keep]
    removed_energy = float(np.sum(removed_sq * removed_sq)) / total
    sparse = SparseSpectrum(
        rows=rows, cols=cols, total_units=total, u=uu, v=vv, values=values
    )
    report = ReductionReport(
        total_units=total,
        retained_units=retained,
        reduction_ratio=total / retained if retained else math.inf,
        threshold_value=float(threshold),
        threshold_fraction=None,
        removed_energy=removed_energy,
        psnr_vs_full_db=None,
    )
    return sparse, report


def threshold_for_ratio(spec: Spectrum, target_ratio: float) -> RatioThreshold:
    """Smallest threshold on the magnitude ladder reaching the target ratio.

    Candidate thresholds are 0 and the distinct coefficient magnitudes, so
    equal-magnitude coefficients are never split. If even retaining only
    the top magnitude class cannot reach the target, that threshold is
    returned with its (smaller) achieved ratio.
    """
    if target_ratio < 1:
        raise ValueError("target_ratio must be at least 1")
    if spec.shifted:
        raise ValueError("spectrum is display-shifted; unshift before thresholding")
    mag = np.abs(spec.coeffs).ravel()
    total = mag.size
    distinct = np.unique(mag)  # ascending
    candidates = distinct if distinct[0] == 0.0 else np.concatenate(([0.0], distinct))
    # retained(T) = count(mag >= T); ratio is non-decreasing in T
    counts = total - np.searchsorted(np.sort(mag), candidates, side="left")
    for threshold, retained in zip(candidates, counts):
        if total / retained >= target_ratio:
            return RatioThreshold(float(threshold), total / int(retained), int(retained))
    top = candidates[-1]
    retained = int(counts[-1])
    return RatioThreshold(float(top), total / retained, retained)


def psnr(reference: ImagePlane, candidate: ImagePlane) -> float:
    """Peak signal-to-noise ratio in dB for unit dynamic range.

    Identical inputs return math.inf.
    """
    if reference.shape != candidate.shape:
        raise ValueError(
            f"dimension mismatch: {reference.shape} vs {candidate.shape}"
        )
    diff = reference.pixels - candidate.pixels
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def _dense_from_sparse(sparse: SparseSpectrum) -> Spectrum:
    grid = np.zeros((sparse.rows, sparse.cols), dtype=np.complex128)
    grid[sparse.u, sparse.v] = sparse.values
    return Spectrum(grid, shifted=False)


def _finish_spectral(
    integrated: Spectrum,
    threshold: float,
    threshold_fraction: float,
    renorm: Renorm,
) -> SpectralMergeResult:
    sparse, partial = apply_threshold(integrated, threshold)
    if partial.retained_units == partial.total_units:
        raw = inverse2d(integrated, imag_tol=_IMAG_RESIDUE_TOL)
        quality = math.inf  # nothing removed, lossless by construction
    else:
        raw_full = inverse2d(integrated, imag_tol=_IMAG_RESIDUE_TOL)
        raw = inverse2d(_dense_from_sparse(sparse), imag_tol=_IMAG_RESIDUE_TOL)
        quality = psnr(raw_full, raw)
    merged = ImagePlane(_renormalize(raw.pixels, renorm))
    report = ReductionReport(
        total_units=partial.total_units,
        retained_units=partial.retained_units,
        reduction_ratio=partial.reduction_ratio,
        threshold_value=partial.threshold_value,
        threshold_fraction=threshold_fraction,
        removed_energy=partial.removed_energy,
        psnr_vs_full_db=quality,
    )
    return SpectralMergeResult(merged, sparse, report)


def merge_spectral(
    planes: Sequence[ImagePlane], config: MergeConfig | None = None
) -> SpectralMergeResult:
    """Frequency-domain merge with magnitude thresholding.

    Integrates the prominence-weighted spectra, removes coefficients
    below T = threshold_fraction * max|coef|, inverse-transforms the
    retained set and applies the same renormalization as the spatial
    route. With unit coefficients and threshold 0 this equals
    :func:`merge_spatial` up to transform rounding.
    """
    planes = _require_planes(planes)
    config = config or MergeConfig()
    coefficients = config.resolved_coefficients(len(planes))
    integrated = integrate_spectra(planes, coefficients, config.alignment)
    peak = float(np.abs(integrated.coeffs).max())
    threshold = config.threshold_fraction * peak
    return _finish_spectral(
        integrated, threshold, config.threshold_fraction, config.spatial_renorm
    )


def merge_to_ratio(
    planes: Sequence[ImagePlane],
    target_ratio: float,
    config: MergeConfig | None = None,
) -> SpectralMergeResult:
    """Spectral merge thresholded to approximately a target reduction ratio.

    The threshold comes from :func:`threshold_for_ratio`; the config's own
    threshold_fraction is ignored and the report's fraction is derived as
    T / max|coef|.
    """
    planes = _require_planes(planes)
    config = config or MergeConfig()
    coefficients = config.resolved_coefficients(len(planes))
    integrated = integrate_spectra(planes, coefficients, config.alignment)
    choice = threshold_for_ratio(integrated, target_ratio)
    peak = float(np.abs(integrated.coeffs).max())
    fraction = choice.threshold / peak if peak > 0 else 0.0
    # the ladder threshold is a retained magnitude, so fraction < 1 unless
    # everything shares one magnitude; cap to keep the report field valid
    fraction = min(fraction, math.nextafter(1.0, 0.0))
    return _finish_spectral(
        integrated, choice.threshold, fraction, config.spatial_renorm
    )
