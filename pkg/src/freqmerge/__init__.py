"""Grayscale image merging in the spatial and frequency domains.

The spatial route adds aligned intensities; the spectral route integrates
prominence-weighted spectra, optionally thresholds small coefficients for
data reduction, and inverse-transforms the result. Sparse retained
spectra persist in the FMG1 binary format; a CLI and an HTTP tuning
service wrap the library.
"""

from .codec import (
    AlignMode,
    AlignmentPolicy,
    PgmParseError,
    PgmTruncatedError,
    align,
    magnitude_image,
    read_pgm,
    spectrum_heatmap,
    write_pgm,
)
from .geometry import SpectralIndex, WaveGeometry, wave_geometry
from .merge import (
    MergeConfig,
    RatioThreshold,
    ReductionReport,
    Renorm,
    SparseSpectrum,
    SpectralMergeResult,
    apply_threshold,
    integrate_spectra,
    merge_spatial,
    merge_spectral,
    merge_to_ratio,
    psnr,
    threshold_for_ratio,
)
from .sparse import (
    FmgCorruptionError,
    FmgFormatError,
    FmgTruncatedError,
    decode_fmg,
    densify,
    encode_fmg,
)
from .spectral import (
    ImagePlane,
    Spectrum,
    dft1d_direct,
    energy,
    fft1d,
    forward2d,
    inverse2d,
    shift_center,
)

__version__ = "0.1.0"

__all__ = [
    "AlignMode",
    "AlignmentPolicy",
    "FmgCorruptionError",
    "FmgFormatError",
    "FmgTruncatedError",
    "ImagePlane",
    "MergeConfig",
    "PgmParseError",
    "PgmTruncatedError",
    "RatioThreshold",
    "ReductionReport",
    "Renorm",
    "SparseSpectrum",
    "SpectralIndex",
    "Spectrum",
    "SpectralMergeResult",
    "WaveGeometry",
    "align",
    "apply_threshold",
    "decode_fmg",
    "densify",
    "dft1d_direct",
    "encode_fmg",
    "energy",
    "fft1d",
    "forward2d",
    "integrate_spectra",
    "inverse2d",
    "magnitude_image",
    "merge_spatial",
    "merge_spectral",
    "merge_to_ratio",
    "psnr",
    "read_pgm",
    "shift_center",
    "spectrum_heatmap",
    "threshold_for_ratio",
    "wave_geometry",
    "write_pgm",
]
