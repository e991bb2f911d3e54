"""Command-line front end: ``divphase {dpi1d,dpi2d,rotate,synth}``.

Every run writes its outputs plus a ``manifest.json`` echoing the resolved
configuration into ``--out``. Exit status is 0 on success, 2 for invalid
input (bad flags, unreadable or malformed files) and 1 for internal errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .dpi2d import binarize, blockwise_dpi
from .errors import ImageIOError, InvalidInputError
from .imaging import (
    TEXTURE_KINDS,
    field_to_image,
    load_image,
    save_image,
    synth_texture,
    to_grayscale,
)
from .phase1d import ChannelSet, pairwise_dpi_matrix
from .rotation import estimate_rotation, rotate_field

log = logging.getLogger("divphase")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2

MATRIX_FMT = "%.17g"
HEATMAP_CELL_PX = 16
RED = (200, 40, 40)
GREEN = (40, 170, 60)


class InputError(Exception):
    """User-facing input problem; mapped to exit status 2."""


def _pair(kind=float):
    def parse(text):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"non-numeric value in {text!r}") from None
    return parse


def read_signal_csv(path) -> tuple[tuple[str, ...], np.ndarray]:
    """Read a CSV with a header row of labels and one column per channel.

    Returns ``(labels, data)`` with ``data`` shaped ``(channels, samples)``.
    """
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise InputError(f"{path}: cannot open ({exc.strerror or exc})") from None
    with fh:
        rows = csv.reader(fh)
        try:
            header = next(rows)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        labels = tuple(h.strip() for h in header)
        if not all(labels):
            raise InputError(f"{path}: header row has an empty label")
        data = []
        for lineno, row in enumerate(rows, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(labels):
                raise InputError(
                    f"{path}: row {lineno} has {len(row)} fields, header has {len(labels)}"
                )
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise InputError(
                        f"{path}: row {lineno}, column {col} ({labels[col - 1]!r}): "
                        f"not a number: {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise InputError(f"{path}: row {lineno}, column {col}: non-finite value")
                values.append(v)
            data.append(values)
    if not data:
        raise InputError(f"{path}: no sample rows")
    return labels, np.array(data).T


def write_matrix(path: Path, values, header: str = "", fmt: str = MATRIX_FMT) -> None:
    np.savetxt(path, np.asarray(values), fmt=fmt, delimiter=" ", header=header)


def write_manifest(out: Path, command: str, config: dict, outputs: list[str]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "outputs": sorted(outputs),
        "version": __version__,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def render_mask(flags: np.ndarray, path: Path) -> None:
    """Two-colour heatmap: green where a cell differs significantly, red elsewhere."""
    rgb = np.where(flags[..., None], np.array(GREEN, np.uint8), np.array(RED, np.uint8))
    big = np.kron(rgb, np.ones((HEATMAP_CELL_PX, HEATMAP_CELL_PX, 1), dtype=np.uint8))
    Image.fromarray(big.astype(np.uint8)).save(path, format="PNG")


def _grayscale(path) -> np.ndarray:
    return to_grayscale(load_image(path))


def cmd_dpi1d(args) -> dict:
    labels, data = read_signal_csv(args.csv)
    cs = ChannelSet.from_array(data, args.rate, labels)
    if len(cs) < 2:
        raise InputError(f"{args.csv}: need at least 2 channels, found {len(cs)}")
    windows = args.window or [(0.0, cs.n_samples / args.rate)]
    outputs = []
    resolved = []
    for k, (start_s, end_s) in enumerate(windows):
        start, stop = int(round(start_s * args.rate)), int(round(end_s * args.rate))
        if not 0 <= start < stop <= cs.n_samples:
            raise InputError(
                f"window {start_s},{end_s} s is outside the recording "
                f"(0 to {cs.n_samples / args.rate:g} s)"
            )
        m = pairwise_dpi_matrix(cs.window(start, stop), *args.band)
        name = f"dpi_window{k}.txt"
        write_matrix(args.out / name, m.values, header="labels: " + " ".join(labels))
        outputs.append(name)
        resolved.append({"start_s": start_s, "end_s": end_s, "start_sample": start,
                         "stop_sample": stop, "file": name})
        log.info("window %d [%g, %g) s -> %s", k, start_s, end_s, name)
    return {
        "inputs": [str(args.csv)],
        "rate_hz": args.rate,
        "band_hz": list(args.band),
        "labels": list(labels),
        "windows": resolved,
        "_outputs": outputs,
    }


def cmd_dpi2d(args) -> dict:
    a, b = _grayscale(args.image_a), _grayscale(args.image_b)
    if a.shape != b.shape:
        raise InputError(f"image sizes differ: {a.shape} vs {b.shape}")
    m = blockwise_dpi(a, b, args.ns)
    mask = binarize(m)
    write_matrix(args.out / "dpi_matrix.txt", m.values)
    write_matrix(args.out / "mask.txt", mask.flags.astype(int), fmt="%d")
    (args.out / "threshold.txt").write_text(repr(mask.threshold) + "\n")
    outputs = ["dpi_matrix.txt", "mask.txt", "threshold.txt"]
    if not args.no_heatmap:
        render_mask(mask.flags, args.out / "mask.png")
        outputs.append("mask.png")
    log.info("threshold %.6g, %d of %d cells flagged", mask.threshold,
             int(mask.flags.sum()), mask.flags.size)
    return {
        "inputs": [str(args.image_a), str(args.image_b)],
        "ns": args.ns,
        "threshold": mask.threshold,
        "flagged_cells": int(mask.flags.sum()),
        "_outputs": outputs,
    }


def cmd_rotate(args) -> dict:
    ref, tgt = _grayscale(args.reference), _grayscale(args.target)
    if ref.shape != tgt.shape:
        raise InputError(f"image sizes differ: {ref.shape} vs {tgt.shape}")
    if ref.shape[0] != ref.shape[1]:
        raise InputError(f"rotation estimation needs square images, got {ref.shape}")
    est = estimate_rotation(ref, tgt, args.step)
    result = {"angle_deg": est.angle_deg, "score": est.score, "step_deg": args.step}
    (args.out / "rotation.json").write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    write_matrix(args.out / "curve.txt", np.array(est.curve), header="angle_deg score")
    log.info("estimated rotation %g deg (score %.6f)", est.angle_deg, est.score)
    return {
        "inputs": [str(args.reference), str(args.target)],
        "step_deg": args.step,
        "angle_deg": est.angle_deg,
        "score": est.score,
        "_outputs": ["rotation.json", "curve.txt"],
    }


def cmd_synth(args) -> dict:
    params = {}
    if args.kind == "plane_wave":
        params["wavevector"] = args.wavevector
        params["phase"] = args.phase
    elif args.kind == "gaussian_blobs":
        params["n_blobs"] = args.n_blobs
        params["sigma"] = args.sigma
    else:
        params["cutoff"] = args.cutoff
        params["taper"] = args.taper
    field = synth_texture(args.kind, args.shape, seed=args.seed, **params)
    img = field_to_image(field, bit_depth=args.bit_depth)
    values = img.values
    if args.rotate:
        values = np.clip(rotate_field(values, args.rotate), 0.0, 1.0)
        img = type(img)(values, bit_depth=args.bit_depth)
    name = args.name or f"{args.kind}.png"
    save_image(img, args.out / name)
    return {
        "kind": args.kind,
        "shape": list(args.shape),
        "seed": args.seed,
        "params": {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()},
        "rotate_deg": args.rotate,
        "bit_depth": args.bit_depth,
        "_outputs": [name],
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="divphase", description="Divergence Phase Index for signals and images."
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", type=Path, required=True, help="output directory")

    sp = sub.add_parser("dpi1d", help="pairwise channel DPI matrices from a CSV recording")
    sp.add_argument("csv", type=Path)
    sp.add_argument("--rate", type=float, required=True, help="sample rate in Hz")
    sp.add_argument("--band", type=_pair(), default=(1.0, 3.0), metavar="LO,HI",
                    help="bandpass edges in Hz (default 1,3)")
    sp.add_argument("--window", type=_pair(), action="append", metavar="START,END",
                    help="analysis window in seconds; repeat for several (default: whole file)")
    common(sp)
    sp.set_defaults(func=cmd_dpi1d)

    sp = sub.add_parser("dpi2d", help="blockwise DPI matrix and elbow mask of two images")
    sp.add_argument("image_a", type=Path)
    sp.add_argument("image_b", type=Path)
    sp.add_argument("--ns", type=int, default=5, help="blocks per side (default 5)")
    sp.add_argument("--no-heatmap", action="store_true", help="skip the mask.png rendering")
    common(sp)
    sp.set_defaults(func=cmd_dpi2d)

    sp = sub.add_parser("rotate", help="estimate the rotation between two square images")
    sp.add_argument("reference", type=Path)
    sp.add_argument("target", type=Path)
    sp.add_argument("--step", type=float, default=1.0, help="angle grid step in degrees")
    common(sp)
    sp.set_defaults(func=cmd_rotate)

    sp = sub.add_parser("synth", help="write a synthetic test image")
    sp.add_argument("kind", choices=sorted(TEXTURE_KINDS))
    sp.add_argument("--shape", type=_pair(int), default=(128, 128), metavar="H,W")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--wavevector", type=_pair(float), default=(8.0, 0.0), metavar="K1,K2")
    sp.add_argument("--phase", type=float, default=0.0)
    sp.add_argument("--n-blobs", type=int, default=12)
    sp.add_argument("--sigma", type=float, default=4.0)
    sp.add_argument("--cutoff", type=float, default=0.1, help="cycles/sample")
    sp.add_argument("--taper", type=float, default=None,
                    help="fade to zero outside this fraction of the inscribed radius")
    sp.add_argument("--rotate", type=float, default=0.0,
                    help="rotate the image counterclockwise by this many degrees")
    sp.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    sp.add_argument("--name", help="output file name (default KIND.png)")
    common(sp)
    sp.set_defaults(func=cmd_synth)
    return p


def _config_echo(args) -> dict:
    cfg = {}
    for k, v in vars(args).items():
        if k in ("func", "verbose"):
            continue
        if isinstance(v, Path):
            v = str(v)
        elif isinstance(v, tuple):
            v = list(v)
        elif isinstance(v, list):
            v = [list(x) if isinstance(x, tuple) else x for x in v]
        cfg[k] = v
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        result = args.func(args)
        outputs = result.pop("_outputs")
        write_manifest(args.out, args.command, {"args": _config_echo(args), "resolved": result},
                       outputs)
    except (InputError, InvalidInputError, ImageIOError) as exc:
        print(f"divphase {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
