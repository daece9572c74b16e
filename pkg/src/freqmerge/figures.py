"""Matplotlib renderings of a merge: written next to the report files.

All figures go to PNG via the Agg backend so the CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .codec import spectrum_heatmap
from .merge import ReductionReport, SparseSpectrum
from .spectral import ImagePlane, Spectrum

__all__ = ["save_merge_figures"]


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _merged_figure(merged: ImagePlane, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(merged.pixels, cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
    ax.set_title("merged image")
    ax.axis("off")
    return _save(fig, path)


def _spectrum_figure(spec: Spectrum, path: Path) -> Path:
    heat = spectrum_heatmap(spec)
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(heat.pixels, cmap="magma", interpolation="nearest")
    ax.set_title("log-magnitude spectrum (DC centered)")
    ax.set_xlabel("v")
    ax.set_ylabel("u")
    fig.colorbar(im, ax=ax, fraction=0.046)
    return _save(fig, path)


def _ladder_figure(spec: Spectrum, report: ReductionReport | None, path: Path) -> Path:
    mags = np.sort(np.abs(spec.coeffs).ravel())[::-1]
    fig, ax = plt.subplots(figsize=(6, 4))
    positive = mags[mags > 0]
    floor = positive.min() / 10 if positive.size else 1e-12
    ax.semilogy(np.arange(1, mags.size + 1), np.maximum(mags, floor), lw=1.0)
    ax.set_xlabel("coefficient rank")
    ax.set_ylabel("|coefficient|")
    ax.set_title("magnitude ladder")
    if report is not None and report.threshold_value > 0:
        ax.axhline(report.threshold_value, color="tab:red", ls="--", lw=1.0,
                   label=f"threshold {report.threshold_value:.4g}")
        ax.axvline(report.retained_units, color="tab:orange", ls=":", lw=1.0,
                   label=f"retained {report.retained_units} "
                         f"(ratio {report.reduction_ratio:.2f})")
        ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)


def save_merge_figures(
    outdir: str | Path,
    merged: ImagePlane,
    spectrum: Spectrum,
    report: ReductionReport | None = None,
    sparse: SparseSpectrum | None = None,
) -> list[Path]:
    """Render merged image, spectrum heatmap and magnitude ladder to outdir.

    Returns the written paths. ``sparse`` is accepted for symmetry with the
    merge result tuple but only the dense spectrum drives the plots.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [
        _merged_figure(merged, outdir / "merged.png"),
        _spectrum_figure(spectrum, outdir / "spectrum.png"),
        _ladder_figure(spectrum, report, outdir / "magnitude_ladder.png"),
    ]
    return written
