"""Command-line surface.

    srmcf <command> --input PATH [--mask PATH] --output PATH
          [--config PATH] [--truth PATH] [--set key=value ...]

Commands: inpaint, enhance, combo, baseline, curvature-map, diagnose.
Exit codes: 0 success, 2 I/O error, 3 configuration error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import imageio, pipelines
from .errors import ConfigurationError, ImageIOError, NumericalError
from .flow import evolve, horizontal_mean_curvature

_MASKED_COMMANDS = ("inpaint", "combo", "baseline")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srmcf",
        description="Sub-Riemannian curvature-flow image inpainting and enhancement",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("inpaint", "enhance", "combo", "baseline", "curvature-map", "diagnose"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="input image (PGM or PNG)")
        p.add_argument("--output", required=True, help="output image path")
        p.add_argument("--mask", help="mask image; >127 marks corrupted pixels")
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--truth", help="ground-truth image for PSNR reporting")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="config override (repeatable)")
    return parser


def _print_report(report: pipelines.RunReport) -> None:
    print(f"steps: {report.steps}")
    print(f"dt: {report.dt:g}")
    print(f"wall_time: {report.wall_time:.3f}")
    if report.sup_norms:
        print(f"final_sup_norm: {report.sup_norms[-1]:g}")
    if report.psnr_region is not None:
        print(f"psnr: {report.psnr_region:.2f}")
    for w in report.warnings:
        print(f"warning: {w}")


def _curvature_image(img: np.ndarray, cfg: pipelines.PipelineConfig) -> np.ndarray:
    grid, u0, _ = pipelines._lift(img, None, cfg)
    k = horizontal_mean_curvature(grid, u0, cfg.flow.tau)
    mag = np.abs(k).max(axis=-1)
    peak = mag.max()
    return mag / peak if peak > 0 else mag


def _run(args: argparse.Namespace) -> None:
    cfg = imageio.parse_config(args.config, args.set)
    img = imageio.load_image(args.input)
    truth = imageio.load_image(args.truth) if args.truth else None
    mask = None
    if args.command in _MASKED_COMMANDS:
        if not args.mask:
            raise ConfigurationError(f"{args.command} requires --mask")
        mask = imageio.load_mask(args.mask, img.shape)

    report = pipelines.RunReport()
    if args.command == "inpaint":
        out, report = pipelines.inpaint(img, mask, cfg, truth=truth)
    elif args.command == "enhance":
        out, report = pipelines.enhance(img, cfg, truth=truth)
    elif args.command == "combo":
        out, report = pipelines.inpaint_then_enhance(img, mask, cfg, truth=truth)
    elif args.command == "baseline":
        steps = cfg.flow.steps if cfg.flow.steps is not None else pipelines.DEFAULT_INPAINT_STEPS
        out = pipelines.heat_baseline(img, mask, steps)
        report.steps = steps
        if truth is not None:
            report.psnr_region = pipelines.psnr(out, truth, mask)
    elif args.command == "curvature-map":
        out = _curvature_image(img, cfg)
    elif args.command == "diagnose":
        grid, u0, _ = pipelines._lift(img, None, cfg)
        steps = cfg.flow.steps if cfg.flow.steps is not None else 20
        u, diag = evolve(grid, u0, cfg.flow, steps=steps)
        for i, s in enumerate(diag.sup_norms):
            print(f"step_{i + 1}_sup_norm: {s:g}")
        report.steps = steps
        report.dt = diag.dt
        report.wall_time = diag.elapsed
        report.warnings = diag.warnings
        k = horizontal_mean_curvature(grid, u, cfg.flow.tau)
        mag = np.abs(k).max(axis=-1)
        out = mag / mag.max() if mag.max() > 0 else mag
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigurationError(f"unknown command {args.command!r}")

    imageio.save_image(out, args.output)
    _print_report(report)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _run(args)
    except ImageIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
