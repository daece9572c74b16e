"""Scalar descriptors of a spectral index: wavelengths, frequencies, direction.

These are descriptive metadata about a coefficient position, not part of
the transform path. Degenerate indices (u == 0 or v == 0) yield IEEE
infinities and a validity flag instead of raising, so a full-grid sweep
never aborts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["SpectralIndex", "WaveGeometry", "wave_geometry"]


@dataclass(frozen=True)
class SpectralIndex:
    """Position (u, v) inside an R x C spectrum; u, v count sinusoid repetitions."""

    u: int
    v: int
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if not (0 <= self.u < self.rows):
            raise ValueError(f"u must lie in [0, {self.rows})")
        if not (0 <= self.v < self.cols):
            raise ValueError(f"v must lie in [0, {self.cols})")


@dataclass(frozen=True)
class WaveGeometry:
    """Wavelengths (pixels), frequencies (cycles/pixel) and wavefront direction.

    ``lambda_*`` entries are +inf at zero indices. ``theta_wf`` is radians
    and only meaningful when ``theta_defined`` is True (it is undefined for
    u == 0, where the defining ratio divides by zero).
    """

    lambda_u: float
    lambda_v: float
    lambda_wf: float
    omega_u: float
    omega_v: float
    omega_wf: float
    theta_wf: float
    theta_defined: bool


def wave_geometry(idx: SpectralIndex) -> WaveGeometry:
    """Evaluate the wavelength/frequency/direction formulas at one index.

    lambda_u = C/u, lambda_v = R/v, lambda_wf = sqrt(lambda_u^2 + lambda_v^2),
    omega_u = u/C, omega_v = v/R, omega_wf = 1/lambda_wf,
    theta_wf = atan(vC / (uR)).
    """
    u, v = idx.u, idx.v
    r, c = idx.rows, idx.cols

    lambda_u = math.inf if u == 0 else c / u
    lambda_v = math.inf if v == 0 else r / v
    lambda_wf = math.sqrt(lambda_u * lambda_u + lambda_v * lambda_v)
    omega_u = u / c
    omega_v = v / r
    omega_wf = 0.0 if math.isinf(lambda_wf) else 1.0 / lambda_wf
    if u == 0:
        theta_wf, theta_defined = math.nan, False
    else:
        theta_wf, theta_defined = math.atan((v * c) / (u * r)), True

    return WaveGeometry(
        lambda_u=lambda_u,
        lambda_v=lambda_v,
        lambda_wf=lambda_wf,
        omega_u=omega_u,
        omega_v=omega_v,
        omega_wf=omega_wf,
        theta_wf=theta_wf,
        theta_defined=theta_defined,
    )
