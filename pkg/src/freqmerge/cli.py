"""Command-line interface.

Subcommands: merge (spatial or spectral), spectrum (magnitude image),
inspect geometry (per-index wave descriptors), reduce (spectral merge
thresholded to a target reduction ratio), serve (tuning service).

Exit codes: 0 success, 1 usage error, 2 I/O or format error. Output files
are written to a temp name and renamed into place, so a failing run never
leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path

from . import merge as merge_mod
from .codec import (
    AlignMode,
    AlignmentPolicy,
    PgmParseError,
    magnitude_image,
    read_pgm,
    write_pgm,
)
from .geometry import SpectralIndex, wave_geometry
from .jsonio import dumps_canonical
from .merge import MergeConfig, Renorm
from .spectral import ImagePlane, forward2d
from .sparse import encode_fmg

__all__ = ["run", "main"]

PROG = "freqmerge"


class _UsageError(Exception):
    pass


class _IoError(Exception):
    def __init__(self, path, message: str):
        super().__init__(f"{path}: {message}")


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog=PROG, description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_merge = sub.add_parser("merge", help="merge images spatially or spectrally")
    p_merge.add_argument("--mode", choices=["spatial", "spectral"], required=True)
    p_merge.add_argument("--coeffs", metavar="A1,A2,...",
                         help="comma-separated prominence coefficients (default all 1)")
    p_merge.add_argument("--threshold-frac", type=float, default=None, metavar="X",
                         help="spectral only: remove coefficients below X*max|coef|")
    p_merge.add_argument("--renorm", choices=[r.value for r in Renorm],
                         default=Renorm.divide_by_max.value)
    p_merge.add_argument("--align", choices=[m.value for m in AlignMode],
                         default=AlignMode.center_pad.value)
    p_merge.add_argument("-o", "--output", required=True, metavar="OUT.pgm")
    p_merge.add_argument("--sparse", metavar="OUT.fmg",
                         help="spectral only: write retained coefficients")
    p_merge.add_argument("--report", metavar="OUT.json",
                         help="spectral only: write the reduction report")
    p_merge.add_argument("--figures", metavar="DIR",
                         help="spectral only: render report figures into DIR")
    p_merge.add_argument("inputs", nargs="+", metavar="IN.pgm")

    p_spec = sub.add_parser("spectrum", help="write a spectrum magnitude image")
    p_spec.add_argument("--shift", action="store_true", help="center DC")
    p_spec.add_argument("--log", action="store_true", help="log-scale magnitudes")
    p_spec.add_argument("-o", "--output", required=True, metavar="OUT.pgm")
    p_spec.add_argument("input", metavar="IN.pgm")

    p_inspect = sub.add_parser("inspect", help="inspect spectral metadata")
    inspect_sub = p_inspect.add_subparsers(dest="what", required=True)
    p_geom = inspect_sub.add_parser("geometry",
                                    help="wavelengths/frequencies/direction of (u, v)")
    p_geom.add_argument("--u", type=int, required=True)
    p_geom.add_argument("--v", type=int, required=True)
    p_geom.add_argument("--rows", type=int, required=True)
    p_geom.add_argument("--cols", type=int, required=True)
    p_geom.add_argument("--degrees", action="store_true",
                        help="report the wavefront direction in degrees")

    p_reduce = sub.add_parser("reduce",
                              help="spectral merge thresholded to a target ratio")
    p_reduce.add_argument("--target-ratio", type=float, required=True, metavar="RATIO")
    p_reduce.add_argument("-o", "--output", required=True, metavar="OUT.pgm")
    p_reduce.add_argument("--sparse", required=True, metavar="OUT.fmg")
    p_reduce.add_argument("--report", required=True, metavar="OUT.json")
    p_reduce.add_argument("--figures", metavar="DIR",
                          help="render report figures into DIR")
    p_reduce.add_argument("inputs", nargs="+", metavar="IN.pgm")

    p_serve = sub.add_parser("serve", help="run the interactive tuning service")
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--host", default="127.0.0.1")

    return parser


def _parse_coeffs(text: str, n_inputs: int) -> tuple[float, ...]:
    try:
        coeffs = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise _UsageError(f"--coeffs {text!r} is not a comma-separated float list")
    if not all(math.isfinite(c) for c in coeffs):
        raise _UsageError("--coeffs values must be finite")
    if len(coeffs) != n_inputs:
        raise _UsageError(
            f"--coeffs lists {len(coeffs)} values for {n_inputs} input images"
        )
    return coeffs


def _load_plane(path: str) -> ImagePlane:
    try:
        data = Path(path).read_bytes()
    except OSError as err:
        raise _IoError(path, err.strerror or str(err))
    try:
        return read_pgm(data)
    except PgmParseError as err:
        raise _IoError(path, str(err))


def _write_atomic(path: str, data: bytes) -> None:
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{target.name}.")
    except OSError as err:
        raise _IoError(path, err.strerror or str(err))
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, target)
    except OSError as err:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise _IoError(path, err.strerror or str(err))


def _cmd_merge(args) -> int:
    if args.mode == "spatial":
        for flag in ("threshold_frac", "sparse", "report", "figures"):
            if getattr(args, flag) is not None:
                name = "--" + flag.replace("_", "-")
                raise _UsageError(f"{name} requires --mode spectral")

    coeffs = None
    if args.coeffs is not None:
        coeffs = _parse_coeffs(args.coeffs, len(args.inputs))
        if args.mode == "spatial" and any(c != 1.0 for c in coeffs):
            raise _UsageError(
                "spatial merge is an unweighted sum; --coeffs must be all 1"
            )

    fraction = args.threshold_frac if args.threshold_frac is not None else 0.0
    if not (0.0 <= fraction < 1.0):
        raise _UsageError("--threshold-frac must lie in [0, 1)")

    config = MergeConfig(
        coefficients=coeffs,
        threshold_fraction=fraction,
        spatial_renorm=Renorm(args.renorm),
        alignment=AlignmentPolicy(mode=AlignMode(args.align)),
    )
    planes = [_load_plane(path) for path in args.inputs]

    if args.mode == "spatial":
        merged = merge_mod.merge_spatial(planes, config)
        _write_atomic(args.output, write_pgm(merged))
        return 0

    merged, sparse, report = merge_mod.merge_spectral(planes, config)
    _write_atomic(args.output, write_pgm(merged))
    if args.sparse is not None:
        _write_atomic(args.sparse, encode_fmg(sparse))
    if args.report is not None:
        _write_atomic(args.report, (report.to_json() + "\n").encode("ascii"))
    if args.figures is not None:
        _render_figures(args.figures, planes, config, merged, report)
    return 0


def _render_figures(outdir, planes, config, merged, report) -> None:
    from .figures import save_merge_figures  # matplotlib import cost on demand

    integrated = merge_mod.integrate_spectra(
        planes, config.resolved_coefficients(len(planes)), config.alignment
    )
    try:
        save_merge_figures(outdir, merged, integrated, report)
    except OSError as err:
        raise _IoError(outdir, err.strerror or str(err))


def _cmd_spectrum(args) -> int:
    plane = _load_plane(args.input)
    image = magnitude_image(forward2d(plane), shift=args.shift, log=args.log)
    _write_atomic(args.output, write_pgm(image))
    return 0


def _cmd_inspect_geometry(args) -> int:
    try:
        idx = SpectralIndex(u=args.u, v=args.v, rows=args.rows, cols=args.cols)
    except ValueError as err:
        raise _UsageError(str(err))
    geo = wave_geometry(idx)
    theta = geo.theta_wf
    if args.degrees and geo.theta_defined:
        theta = math.degrees(theta)
    print(dumps_canonical({
        "lambda_u": geo.lambda_u,
        "lambda_v": geo.lambda_v,
        "lambda_wf": geo.lambda_wf,
        "omega_u": geo.omega_u,
        "omega_v": geo.omega_v,
        "omega_wf": geo.omega_wf,
        "theta_wf": theta if geo.theta_defined else None,
        "theta_defined": geo.theta_defined,
    }))
    return 0


def _cmd_reduce(args) -> int:
    if args.target_ratio < 1.0:
        raise _UsageError("--target-ratio must be at least 1")
    planes = [_load_plane(path) for path in args.inputs]
    config = MergeConfig()
    merged, sparse, report = merge_mod.merge_to_ratio(planes, args.target_ratio, config)
    _write_atomic(args.output, write_pgm(merged))
    _write_atomic(args.sparse, encode_fmg(sparse))
    _write_atomic(args.report, (report.to_json() + "\n").encode("ascii"))
    if args.figures is not None:
        _render_figures(args.figures, planes, config, merged, report)
    return 0


def _cmd_serve(args) -> int:
    if not (0 < args.port < 65536):
        raise _UsageError(f"--port {args.port} outside (0, 65536)")
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def run(argv: list[str]) -> int:
    """Parse argv (without the program name) and execute one subcommand."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help exits 0 through here
        code = exc.code
        return int(code) if isinstance(code, int) else 0

    try:
        if args.command == "merge":
            return _cmd_merge(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "inspect":
            return _cmd_inspect_geometry(args)
        if args.command == "reduce":
            return _cmd_reduce(args)
        if args.command == "serve":
            return _cmd_serve(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as err:
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        # config/value validation surfaced below the flag layer
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return 1
    except _IoError as err:
        print(f"{PROG}: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
