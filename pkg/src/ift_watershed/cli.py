"""Command-line front end.

Example::

    ift-watershed --gen noise:seed=42 --dims 8x8x8 --variant V --out labels.bin \
        --stats run.txt --slice z:4:mid.pgm

Exit codes: 0 success, 2 usage, 3 I/O failure, 4 malformed input file,
5 invalid data (dimensions, value range, markers).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .buckets import Variant
from .engine import run_ift
from .errors import FormatError, WatershedError
from .formats import (
    ensure_parent,
    export_slice,
    load_markers,
    load_raw_volume,
    parse_dims,
    write_labels,
)
from .memmodel import MemModel, report
from .synthgen import chessboard_markers, default_markers, generate, parse_gen_spec


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_INVALID = 5


def _slice_arg(text: str) -> tuple[str, int, str]:
    axis, _, rest = text.partition(":")
    index, _, path = rest.partition(":")
    if axis.lower() not in ("x", "y", "z") or not index or not path:
        raise argparse.ArgumentTypeError(f"expected AXIS:INDEX:PATH, got {text!r}")
    try:
        return axis.lower(), int(index), path
    except ValueError:
        raise argparse.ArgumentTypeError(f"slice index must be an integer, got {index!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ift-watershed",
        description="3D watershed-from-markers segmentation with bucket-queue IFT variants.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="raw volume, x-fastest, little-endian")
    src.add_argument(
        "--gen",
        metavar="SPEC",
        help="synthetic volume instead of --input, e.g. noise:seed=42,low=0,high=255",
    )
    p.add_argument("--dims", required=True, metavar="XxYxZ")
    p.add_argument("--bits", type=int, choices=(8, 12, 16), default=8)
    p.add_argument("--markers", metavar="PATH", help="marker text file ('in|out X Y Z' lines)")
    p.add_argument(
        "--marker-pattern",
        choices=("center", "chessboard"),
        default="center",
        help="markers used with --gen when --markers is absent",
    )
    p.add_argument("--variant", default="V", choices=[v.value for v in Variant])
    p.add_argument("--out", required=True, metavar="PATH", help="label file, one byte per voxel")
    p.add_argument("--stats", metavar="PATH", help="write the key=value run report here")
    p.add_argument(
        "--slice",
        action="append",
        default=[],
        type=_slice_arg,
        metavar="AXIS:INDEX:PATH",
        help="export a label slice as PGM (repeatable)",
    )
    p.add_argument(
        "--slice-volume",
        action="append",
        default=[],
        type=_slice_arg,
        metavar="AXIS:INDEX:PATH",
        help="export an intensity slice as PGM (repeatable)",
    )
    p.add_argument("--buckets", choices=("maxdiff", "precision"), default="precision")
    p.add_argument("-q", "--quiet", action="store_true", help="do not print the report")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _run(args) -> int:
    dims = parse_dims(args.dims)
    if args.input:
        if not args.markers:
            raise _Usage("--markers is required with --input")
        vol = load_raw_volume(args.input, dims, args.bits)
    else:
        vol = generate(parse_gen_spec(args.gen, dims, args.bits))
    if args.markers:
        markers = load_markers(args.markers, dims)
    elif args.marker_pattern == "chessboard":
        markers = chessboard_markers(dims)
    else:
        markers = default_markers(dims)

    result = run_ift(vol, markers, args.variant, buckets=args.buckets)
    ensure_parent(args.out)
    write_labels(result.labels, args.out)

    for axis, index, path in args.slice:
        ensure_parent(path)
        export_slice(result.labels, axis, index, path, dims=dims)
    for axis, index, path in args.slice_volume:
        ensure_parent(path)
        export_slice(vol, axis, index, path)

    s = result.stats
    text = report(s, MemModel.build(args.variant, s.c_buckets, s.n, s.m))
    if args.stats:
        ensure_parent(args.stats)
        with open(args.stats, "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.quiet:
        sys.stdout.write(text)
    return EXIT_OK


class _Usage(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _run(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"ift-watershed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"ift-watershed: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (WatershedError, IndexError, ValueError) as exc:
        print(f"ift-watershed: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"ift-watershed: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
