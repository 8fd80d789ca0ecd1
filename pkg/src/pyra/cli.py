"""Command-line interface.

Exit codes: 0 success, 1 validation error (bad flags, invariant
violations), 2 I/O failure. Diagnostics go to stderr; machine-readable
output goes to stdout or the --out paths. Seeded commands are
byte-reproducible for a fixed seed, and --threads never changes output
bytes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import MANIFEST_FORMAT_VERSION, MAP_ENCODING_VERSION, __version__, io
from .aggregate import aggregate_samples, binarize
from .augment import ClassicAugmentParams, expand_dataset, split_dataset
from .errors import CorruptImageError, UnsupportedImageError, ValidationError
from .grids import checkerboard, parse_grid_list
from .gridify import gridify_mask
from .metrics import evaluate
from .postproc import snap_to_grid
from .render import render_panel
from .types import GridSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads; never affects output bytes (default: machine parallelism)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress progress notes on stderr")


def _note(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pyra", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("grid", help="write a checkerboard grid raster")
    p.add_argument("--size", type=int, required=True, help="image side in pixels")
    p.add_argument("--n", type=int, required=True, help="cells per side")
    p.add_argument("--out", required=True, help="output PNG path")
    _add_common(p)

    p = sub.add_parser("gridify", help="convert a mask to its grid representation")
    p.add_argument("--mask", required=True, help="input mask PNG")
    p.add_argument("--grid", type=int, required=True, help="cells per side")
    p.add_argument("--out", required=True, help="output PNG path")
    _add_common(p)

    p = sub.add_parser("split", help="assign train/test splits in a manifest")
    p.add_argument("--manifest", required=True, help="input manifest (JSON Lines)")
    p.add_argument("--n-train", type=int, required=True, help="number of train records")
    p.add_argument("--out", required=True, help="output manifest path")
    _add_common(p)

    p = sub.add_parser("augment", help="expand a dataset across grid levels")
    p.add_argument("--manifest", required=True, help="input manifest (JSON Lines)")
    p.add_argument("--grids", required=True, help="comma-separated grid sizes, e.g. 2,4,8")
    p.add_argument("--out-dir", required=True, help="output dataset directory")
    p.add_argument("--classic", action="store_true", help="also apply affine/dropout/noise to train records")
    p.add_argument("--rotation", type=float, default=15.0, help="affine rotation half-range in degrees")
    p.add_argument("--scale-min", type=float, default=0.9)
    p.add_argument("--scale-max", type=float, default=1.1)
    p.add_argument("--translate", type=float, default=0.05, help="translation half-range as width fraction")
    p.add_argument("--holes", type=int, default=4, help="coarse dropout hole count")
    p.add_argument("--hole-frac", type=float, default=0.10, help="dropout hole side as width fraction")
    p.add_argument("--noise-sigma", type=float, default=10.0, help="Gaussian noise sigma (8-bit units)")
    _add_common(p)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("--pred-dir", required=True, help="directory of prediction PNGs (mask or 16-bit map)")
    p.add_argument("--gt-dir", required=True, help="directory of ground-truth mask PNGs")
    p.add_argument("--threshold", type=float, default=0.5, help="threshold for 16-bit probability maps")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    _add_common(p)

    p = sub.add_parser("aggregate", help="reduce sampled maps to mean/std (and optionally a mask)")
    p.add_argument("--samples-dir", required=True, help="sample_*.png directly, or <id>/sample_*.png subdirs")
    p.add_argument("--out-mean", required=True, help="mean output (file, or directory in multi-id mode)")
    p.add_argument("--out-std", required=True, help="std output (file, or directory in multi-id mode)")
    p.add_argument("--threshold", type=float, default=0.5, help="binarization threshold for --out-mask")
    p.add_argument("--out-mask", help="optional binarized mean output")
    _add_common(p)

    p = sub.add_parser("postproc", help="snap a prediction map to a grid")
    p.add_argument("--pred", required=True, help="prediction PNG (16-bit map or 8-bit mask)")
    p.add_argument("--grid", type=int, required=True, help="cells per side")
    p.add_argument("--out", required=True, help="output mask PNG")
    p.add_argument("--cell-threshold", type=float, default=0.5)
    _add_common(p)

    p = sub.add_parser("render", help="render the four-tile result panel")
    p.add_argument("--image", required=True, help="input image PNG (RGB)")
    p.add_argument("--gt", required=True, help="gridded ground-truth mask PNG")
    p.add_argument("--mean", required=True, help="mean map PNG (16-bit)")
    p.add_argument("--std", required=True, help="std map PNG (16-bit)")
    p.add_argument("--grid", type=int, required=True, help="cells per side")
    p.add_argument("--alpha", type=float, default=0.35, help="grid overlay opacity")
    p.add_argument("--out", required=True, help="output panel PNG")
    _add_common(p)

    p = sub.add_parser("version", help="print version and format versions")
    _add_common(p)

    return parser


def _load_prediction(path, threshold: float) -> np.ndarray:
    """Load a prediction as a mask: 16-bit maps are thresholded, 8-bit
    PNGs are binarized at >127."""
    if io.png_bit_depth(path) == 16:
        return binarize(io.load_map(path), threshold)
    return io.load_mask(path)


def _cmd_grid(args) -> int:
    spec = GridSpec(args.n, args.size)
    io.save_image(checkerboard(spec), args.out)
    _note(args, f"wrote {args.out}")
    return EXIT_OK


def _cmd_gridify(args) -> int:
    mask = io.load_mask(args.mask)
    spec = GridSpec(args.grid, mask.shape[0])
    if mask.shape[0] != mask.shape[1]:
        raise ValidationError(f"mask must be square, got {mask.shape}")
    io.save_mask(gridify_mask(mask, spec), args.out)
    _note(args, f"wrote {args.out}")
    return EXIT_OK


def _cmd_split(args) -> int:
    manifest = io.read_manifest(args.manifest)
    out = split_dataset(manifest, seed=args.seed, n_train=args.n_train)
    io.write_manifest(out, args.out)
    _note(args, f"wrote {args.out} ({args.n_train} train / {len(out.records) - args.n_train} test)")
    return EXIT_OK


def _cmd_augment(args) -> int:
    manifest = io.read_manifest(args.manifest)
    grids = parse_grid_list(args.grids)
    classic = None
    if args.classic:
        classic = ClassicAugmentParams(
            rotation_deg=args.rotation,
            scale=(args.scale_min, args.scale_max),
            translate_frac=args.translate,
            dropout_holes=args.holes,
            dropout_size_frac=args.hole_frac,
            noise_sigma=args.noise_sigma,
        )
    out_dir = Path(args.out_dir)
    expanded = expand_dataset(
        manifest,
        grids,
        src_dir=Path(args.manifest).parent,
        out_dir=out_dir,
        classic=classic,
        seed=args.seed,
        threads=args.threads,
    )
    io.write_manifest(expanded, out_dir / "manifest.jsonl")
    _note(
        args,
        f"wrote {out_dir / 'manifest.jsonl'}: "
        f"{len(expanded.train_records())} train, {len(expanded.test_records())} test records",
    )
    return EXIT_OK


def _cmd_eval(args) -> int:
    pred_dir, gt_dir = Path(args.pred_dir), Path(args.gt_dir)
    for d in (pred_dir, gt_dir):
        if not d.is_dir():
            raise FileNotFoundError(f"no such directory: {d}")
    preds = {p.stem: p for p in sorted(pred_dir.glob("*.png"))}
    gts = {p.stem: p for p in sorted(gt_dir.glob("*.png"))}
    if not preds:
        raise ValidationError(f"no PNG predictions found in {pred_dir}")
    if set(preds) != set(gts):
        missing = sorted(set(gts) - set(preds))
        extra = sorted(set(preds) - set(gts))
        raise ValidationError(
            f"prediction/ground-truth id mismatch: missing preds {missing}, unmatched preds {extra}"
        )
    pairs = [
        (name, _load_prediction(preds[name], args.threshold), io.load_mask(gts[name]))
        for name in sorted(preds)
    ]
    report = evaluate(pairs)
    payload = json.dumps(report.to_json_dict(), indent=2, sort_keys=False)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
        _note(args, f"wrote {args.out}")
    else:
        print(payload)
    return EXIT_OK


def _discover_sample_sets(samples_dir: Path) -> dict[str, list[Path]]:
    direct = sorted(samples_dir.glob("sample_*.png"))
    if direct:
        return {"": direct}
    sets = {}
    for sub in sorted(p for p in samples_dir.iterdir() if p.is_dir()):
        files = sorted(sub.glob("sample_*.png"))
        if files:
            sets[sub.name] = files
    if not sets:
        raise ValidationError(f"no sample_*.png files found under {samples_dir}")
    return sets


def _cmd_aggregate(args) -> int:
    samples_dir = Path(args.samples_dir)
    if not samples_dir.is_dir():
        raise FileNotFoundError(f"no such directory: {samples_dir}")
    sets = _discover_sample_sets(samples_dir)
    multi = set(sets) != {""}

    def out_path(base: str, image_id: str) -> Path:
        return Path(base) / f"{image_id}.png" if multi else Path(base)

    for image_id, files in sets.items():
        mean, std = aggregate_samples([io.load_map(f) for f in files])
        io.save_map(mean, out_path(args.out_mean, image_id))
        io.save_map(std, out_path(args.out_std, image_id))
        if args.out_mask:
            io.save_mask(binarize(mean, args.threshold), out_path(args.out_mask, image_id))
        _note(args, f"aggregated {len(files)} samples{' for ' + image_id if image_id else ''}")
    return EXIT_OK


def _cmd_postproc(args) -> int:
    if io.png_bit_depth(args.pred) == 16:
        pred = io.load_map(args.pred)
    else:
        pred = io.load_mask(args.pred).astype(np.float64)
    if pred.shape[0] != pred.shape[1]:
        raise ValidationError(f"prediction must be square, got {pred.shape}")
    spec = GridSpec(args.grid, pred.shape[0])
    io.save_mask(snap_to_grid(pred, spec, args.cell_threshold), args.out)
    _note(args, f"wrote {args.out}")
    return EXIT_OK


def _cmd_render(args) -> int:
    image = io.load_image(args.image)
    if image.shape[2] == 1:
        image = np.repeat(image, 3, axis=2)
    elif image.shape[2] == 4:
        image = image[:, :, :3]
    gt = io.load_mask(args.gt)
    mean = io.load_map(args.mean)
    std = io.load_map(args.std)
    if float(std.max()) > 0.5:
        raise ValidationError("std map values exceed 0.5; is this a probability map?")
    spec = GridSpec(args.grid, image.shape[0])
    panel = render_panel(image, gt, mean, std, spec, alpha=args.alpha)
    io.save_image(panel, args.out)
    _note(args, f"wrote {args.out}")
    return EXIT_OK


def _cmd_version(args) -> int:
    print(
        f"pyra {__version__} "
        f"(manifest-format {MANIFEST_FORMAT_VERSION}, map-encoding {MAP_ENCODING_VERSION})"
    )
    return EXIT_OK


_COMMANDS = {
    "grid": _cmd_grid,
    "gridify": _cmd_gridify,
    "split": _cmd_split,
    "augment": _cmd_augment,
    "eval": _cmd_eval,
    "aggregate": _cmd_aggregate,
    "postproc": _cmd_postproc,
    "render": _cmd_render,
    "version": _cmd_version,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the validation code
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError) as exc:
        print(f"pyra {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FileNotFoundError, CorruptImageError, UnsupportedImageError, OSError) as exc:
        print(f"pyra {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
