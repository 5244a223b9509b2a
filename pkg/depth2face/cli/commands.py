"""Module for the implementations of the command-line subcommands.
Every command takes the parsed arguments, writes its artefacts and returns 0."""
import argparse
import pathlib
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from depth2face.cli.run_config import RunConfig
from depth2face.data import data_options
from depth2face.data.image_io import load_image_dir, read_depth_png, save_rgb_png
from depth2face.data.manifest import DatasetManifest, load_dataset, preprocess_depth
from depth2face.data.paired_sample import PairedSample
from depth2face.data.preprocessing import denormalize_image
from depth2face.data.synthetic import SynthSpec, synthesize_dataset, write_dataset, write_spec
from depth2face.metrics import reports
from depth2face.metrics.concordance import attribute_concordance
from depth2face.metrics.landmarks import landmark_eval
from depth2face.metrics.probe_tables import read_attribute_table, read_landmark_set
from depth2face.metrics.recon_metrics import recon_metrics
from depth2face.models.checkpoint import load_checkpoint
from depth2face.tensor_core.tensor import DataException, Tensor
from depth2face.training.inference import predict, prepare_inputs
from depth2face.training.train_log import TrainLog
from depth2face.training.trainer import LOG_FILE, DetCGANTrainer

SYNTH_SPEC_FILE = "synth_spec.json"
# Flags of `train` that map onto TrainConfig fields
TRAIN_FLAGS = {
    "mode": "mode",
    "mse_weight": "mse_weight",
    "lr": "lr",
    "batch_size": "batch_size",
    "steps": "total_steps",
    "seed": "seed",
    "base_filters": "base_filters",
    "k": "discriminator_steps",
    "checkpoint_every": "checkpoint_interval",
    "log_every": "log_interval",
    "threshold": "binary_threshold",
}


def status(message: str, quiet: bool = False) -> None:
    """Prints a status line to stderr."""
    if not quiet:
        print(message, flush=True, file=sys.stderr)


def emit_report(report: dict, out: Optional[str], quiet: bool = False) -> None:
    """Prints the table of a report and writes its JSON when out is given."""
    print(reports.render_report(report), flush=True)
    if out:
        status(f"Report written to {reports.write_report(report, out)}", quiet)


# DATA
def cmd_synth_data(args: argparse.Namespace) -> int:
    """Writes a synthetic paired dataset and its manifest."""
    spec = SynthSpec(
        seed=args.seed,
        count=args.count,
        blob_min=args.blob_min,
        blob_max=args.blob_max,
        colormap=args.colormap,
        shading=args.shading,
    )
    samples = synthesize_dataset(spec, quiet=args.quiet)
    manifest = write_dataset(samples, args.out, args.d_min, args.d_max, quiet=args.quiet)
    write_spec(spec, pathlib.Path(args.out) / SYNTH_SPEC_FILE)
    status(f"Wrote {len(samples)} pairs, manifest {manifest}", args.quiet)
    return 0


# TRAINING
def train_overrides(args: argparse.Namespace) -> dict:
    """Returns the TrainConfig values given explicitly on the command line."""
    overrides = {
        field: getattr(args, flag)
        for flag, field in TRAIN_FLAGS.items()
        if getattr(args, flag, None) is not None
    }
    if args.binary_maps:
        overrides["input_kind"] = "binary"
    if args.record_timing:
        overrides["record_timing"] = True
    return overrides


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Creates the RunConfig of `train`, from --config when given, updated by the flags."""
    overrides = train_overrides(args)
    if args.config:
        run_config = RunConfig.load(args.config, overrides)
    else:
        run_config = RunConfig.from_dict({"train": {}}, overrides)
        if args.manifest:
            run_config.synth = None
            run_config.manifest = str(pathlib.Path(args.manifest).resolve())
        else:
            run_config.synth = SynthSpec(
                seed=run_config.train.seed if args.synth_seed is None else args.synth_seed,
                count=args.synth_count,
            )
    if args.out:
        run_config.output_dir = args.out
    if args.resume:
        run_config.resume = args.resume
    if args.eval_manifest:
        run_config.eval_manifest = str(pathlib.Path(args.eval_manifest).resolve())
    if args.eval_split:
        run_config.eval_split = args.eval_split
    return run_config


def load_run_data(
    run_config: RunConfig, quiet: bool = False
) -> Tuple[List[PairedSample], List[PairedSample]]:
    """Returns the (train, held-out) samples of a run."""
    if run_config.manifest is not None:
        manifest = DatasetManifest.load(run_config.manifest)
        samples = load_dataset(manifest, quiet=quiet)
    else:
        samples = synthesize_dataset(run_config.synth, quiet=quiet)
    train = [sample for sample in samples if sample.split == "train"]
    if not train:
        raise DataException("The dataset has no pairs in the train split")
    if run_config.eval_manifest is not None:
        held_out = load_dataset(run_config.eval_manifest, run_config.eval_split, quiet=quiet)
    else:
        held_out = [sample for sample in samples if sample.split == run_config.eval_split]
    return train, held_out


def cmd_train(args: argparse.Namespace) -> int:
    """Trains a generator and writes config snapshot, checkpoints and log."""
    run_config = build_run_config(args)
    train, held_out = load_run_data(run_config, args.quiet)
    run_dir = pathlib.Path(run_config.output_dir)
    status(f"Configuration written to {run_config.save(run_dir)}", args.quiet)
    if run_config.resume:
        checkpoint = load_checkpoint(run_config.resume)
        log_path = run_dir / LOG_FILE
        log = TrainLog.read_csv(log_path) if log_path.is_file() else None
        trainer = DetCGANTrainer.from_checkpoint(
            checkpoint, run_config.train, log, quiet=args.quiet
        )
        status(f"Resuming from {run_config.resume} at step {trainer.step}", args.quiet)
    else:
        trainer = DetCGANTrainer.from_config(run_config.train, quiet=args.quiet)
    trainer.fit(train, run_dir, held_out)
    status(f"Run written to {run_dir}", args.quiet)
    return 0


# INFERENCE
def inference_inputs(args: argparse.Namespace) -> Tuple[List[str], Tensor]:
    """Returns ids and the (n, 1, 64, 64) depth batch from --depth files or a manifest."""
    if args.manifest:
        samples = load_dataset(args.manifest, args.split, quiet=args.quiet)
        if not samples:
            raise DataException(f"Manifest {args.manifest} has no pairs to infer")
        ids = [sample.id for sample in samples]
        depth = np.concatenate([sample.depth.data for sample in samples])
        return ids, Tensor(depth)
    if not args.depth:
        raise DataException("Nothing to infer: give depth PNGs or --manifest")
    paths = [pathlib.Path(path) for path in args.depth]
    ids = [path.stem for path in paths]
    duplicates = sorted({image_id for image_id in ids if ids.count(image_id) > 1})
    if duplicates:
        raise DataException(f"Depth inputs share output names: {', '.join(duplicates)}")
    depth = [
        preprocess_depth(read_depth_png(path), args.d_min, args.d_max).data for path in paths
    ]
    return ids, Tensor(np.concatenate(depth))


def cmd_infer(args: argparse.Namespace) -> int:
    """Writes one generated 64x64 RGB PNG per depth input."""
    checkpoint = load_checkpoint(args.checkpoint)
    generator = checkpoint.get_network("generator")
    trained_binary = checkpoint.config.get("input_kind") == "binary"
    if trained_binary and not args.binarize:
        status("Warning: this generator was trained on binary maps, consider --binarize")
    ids, depth = inference_inputs(args)
    threshold = args.threshold
    if threshold is None:
        threshold = checkpoint.config.get("binary_threshold", data_options.BINARY_THRESHOLD)
    inputs = prepare_inputs(depth, "binary" if args.binarize else "depth", threshold)
    generated = denormalize_image(predict(generator, inputs))
    out_dir = pathlib.Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise DataException(f"Cannot create output directory {out_dir}: {error}") from error
    for image_id, image in tqdm(
        zip(ids, generated), total=len(ids), desc="Writing images", disable=args.quiet
    ):
        save_rgb_png(out_dir / f"{image_id}.png", image)
    status(f"Wrote {len(ids)} images to {out_dir}", args.quiet)
    return 0


# EVALUATION
def aligned_images(
    pred: Dict[str, np.ndarray], gt: Dict[str, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Stacks two image dicts in id order, listing ids that are not in both."""
    only_pred = sorted(set(pred) - set(gt))
    only_gt = sorted(set(gt) - set(pred))
    if only_pred or only_gt:
        raise DataException(
            f"Image ids differ; missing predictions: {', '.join(only_gt) or '-'}; "
            f"missing ground truth: {', '.join(only_pred) or '-'}"
        )
    if not gt:
        raise DataException("No images to evaluate")
    ids = sorted(gt)
    shape = gt[ids[0]].shape
    for image_id in ids:
        if pred[image_id].shape != shape or gt[image_id].shape != shape:
            raise DataException(
                f"Image {image_id} has shape {pred[image_id].shape} (prediction) and "
                f"{gt[image_id].shape} (ground truth), expected {shape}"
            )
    return (
        np.stack([pred[image_id] for image_id in ids]),
        np.stack([gt[image_id] for image_id in ids]),
    )


def cmd_eval_recon(args: argparse.Namespace) -> int:
    """Scores a directory of generated images against the ground truth."""
    pred, gt = aligned_images(load_image_dir(args.pred), load_image_dir(args.gt))
    emit_report(reports.recon_report(recon_metrics(pred, gt), args.method), args.out, args.quiet)
    return 0


def cmd_eval_attrs(args: argparse.Namespace) -> int:
    """Concordance of attribute probe outputs on real and generated images."""
    table = read_attribute_table(args.real, args.generated)
    report = reports.concordance_report(attribute_concordance(table), args.method)
    emit_report(report, args.out, args.quiet)
    return 0


def cmd_eval_landmarks(args: argparse.Namespace) -> int:
    """Detection accuracy and landmark error on generated images."""
    report = landmark_eval(read_landmark_set(args.pred), read_landmark_set(args.gt))
    emit_report(reports.landmark_report(report, args.method), args.out, args.quiet)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    """Prints one row per report, optionally writing the table as CSV."""
    frame = reports.compare_reports(
        [reports.read_report(path) for path in args.reports], args.methods
    )
    print(reports.render_table(frame), flush=True)
    if args.out:
        try:
            frame.to_csv(args.out, na_rep="", lineterminator="\n")
        except OSError as error:
            raise DataException(f"Cannot write comparison {args.out}: {error}") from error
        status(f"Comparison written to {args.out}", args.quiet)
    return 0
