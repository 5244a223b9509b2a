"""Exports the data objects and loaders for easy import"""
from .paired_sample import Batch, PairedSample
from .manifest import DatasetManifest, ManifestEntry, load_dataset, load_pair
from .synthetic import SynthSpec, colormap_oracle, synthesize_dataset, write_dataset
from .batching import batch_for_step, batches
from .preprocessing import binarize_depth, denormalize_image
from .image_io import load_image_dir, save_rgb_png
