"""Command-line entry point of depth2face."""
import argparse
import sys
from typing import List, Optional

from depth2face.cli import commands
from depth2face.data import data_options
from depth2face.data.synthetic import COLORMAPS
from depth2face.tensor_core.tensor import (
    ConfigException,
    DataException,
    Depth2FaceException,
    NumericException,
)
from depth2face.training import train_options

EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def add_synth_parser(subparsers) -> None:
    parser = subparsers.add_parser("synth-data", help="write a synthetic paired dataset")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--count", type=int, default=data_options.SYNTH_COUNT)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--blob-min", type=int, default=data_options.BLOB_MIN)
    parser.add_argument("--blob-max", type=int, default=data_options.BLOB_MAX)
    parser.add_argument("--colormap", choices=sorted(COLORMAPS), default=data_options.COLORMAP)
    parser.add_argument("--shading", type=float, default=data_options.SHADING)
    parser.add_argument("--d-min", type=float, default=data_options.D_MIN)
    parser.add_argument("--d-max", type=float, default=data_options.D_MAX)
    parser.set_defaults(func=commands.cmd_synth_data)


def add_train_parser(subparsers) -> None:
    parser = subparsers.add_parser("train", help="train a generator")
    parser.add_argument("--config", help="config.json of an earlier run to re-create")
    parser.add_argument("--manifest", help="dataset manifest; a synthetic dataset otherwise")
    parser.add_argument("--synth-count", type=int, default=data_options.SYNTH_COUNT)
    parser.add_argument("--synth-seed", type=int, help="seed of the synthetic data (--seed)")
    parser.add_argument("--eval-manifest", help="manifest of a separate evaluation dataset")
    parser.add_argument("--eval-split", choices=data_options.SPLITS)
    parser.add_argument("--out", help="run directory")
    parser.add_argument("--mode", choices=train_options.MODES)
    parser.add_argument("--binary-maps", action="store_true", help="train on binarised depth")
    parser.add_argument("--threshold", type=float, help="binarisation threshold")
    parser.add_argument("--lambda", dest="mse_weight", type=float, help="weight of the MSE term")
    parser.add_argument("--lr", type=float)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--base-filters", type=int)
    parser.add_argument("--k", type=int, help="discriminator updates per step")
    parser.add_argument("--checkpoint-every", type=int)
    parser.add_argument("--log-every", type=int)
    parser.add_argument("--resume", help="checkpoint to continue from")
    parser.add_argument("--record-timing", action="store_true", help="fill the ms log column")
    parser.set_defaults(func=commands.cmd_train)


def add_infer_parser(subparsers) -> None:
    parser = subparsers.add_parser("infer", help="generate RGB faces from depth maps")
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("depth", nargs="*", help="16-bit depth PNGs")
    parser.add_argument("--manifest", help="read the depth maps of a manifest instead")
    parser.add_argument("--split", choices=data_options.SPLITS)
    parser.add_argument("--d-min", type=float, default=data_options.D_MIN)
    parser.add_argument("--d-max", type=float, default=data_options.D_MAX)
    parser.add_argument("--binarize", action="store_true", help="binarise the depth maps")
    parser.add_argument("--threshold", type=float)
    parser.add_argument("--out", required=True, help="output directory")
    parser.set_defaults(func=commands.cmd_infer)


def add_eval_parsers(subparsers) -> None:
    recon = subparsers.add_parser("eval-recon", help="reconstruction metrics")
    recon.add_argument("--pred", required=True, help="directory of generated PNGs")
    recon.add_argument("--gt", required=True, help="directory of ground-truth PNGs")
    recon.set_defaults(func=commands.cmd_eval_recon)

    attrs = subparsers.add_parser("eval-attrs", help="attribute probe concordance")
    attrs.add_argument("--real", required=True, help="probe outputs on real images")
    attrs.add_argument("--generated", required=True, help="probe outputs on generated images")
    attrs.set_defaults(func=commands.cmd_eval_attrs)

    landmarks = subparsers.add_parser("eval-landmarks", help="detection and landmark error")
    landmarks.add_argument("--pred", required=True, help="landmarks on generated images")
    landmarks.add_argument("--gt", required=True, help="landmarks on real images")
    landmarks.set_defaults(func=commands.cmd_eval_landmarks)

    for parser in (recon, attrs, landmarks):
        parser.add_argument("--method", default="", help="method name stored in the report")
        parser.add_argument("--out", help="report JSON to write")

    compare = subparsers.add_parser("compare", help="compare reports of several methods")
    compare.add_argument("reports", nargs="+", help="report JSON files")
    compare.add_argument("--methods", nargs="+", help="row names, one per report")
    compare.add_argument("--out", help="comparison CSV to write")
    compare.set_defaults(func=commands.cmd_compare)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depth2face", description="Depth map to RGB face translation"
    )
    parser.add_argument("--quiet", action="store_true", help="no progress output")
    subparsers = parser.add_subparsers(dest="command", required=True)
    add_synth_parser(subparsers)
    add_train_parser(subparsers)
    add_infer_parser(subparsers)
    add_eval_parsers(subparsers)
    return parser


def exit_code(error: Depth2FaceException) -> int:
    """Maps an exception onto the exit code of its category."""
    if isinstance(error, ConfigException):
        return EXIT_CONFIG
    if isinstance(error, NumericException):
        return EXIT_NUMERIC
    if isinstance(error, DataException):
        return EXIT_DATA
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """Runs a subcommand; failures are reported on stderr and mapped onto exit codes."""
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Depth2FaceException as error:
        print(f"depth2face {args.command}: {error}", flush=True, file=sys.stderr)
        return exit_code(error)
    except OSError as error:
        print(f"depth2face {args.command}: {error}", flush=True, file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
