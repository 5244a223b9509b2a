"""depth2face: depth map to RGB face translation with a deterministic conditional GAN."""
# pylint: disable=wrong-import-position
# BLAS threads have to be pinned before numpy is imported for bitwise reproducibility
from depth2face.tensor_core import tensor_options

tensor_options.pin_threads()

from depth2face.tensor_core.tensor import (
    CheckpointException,
    ConfigException,
    DataException,
    Depth2FaceException,
    NumericException,
    Rng,
    ShapeException,
    StateException,
    Tensor,
)
from depth2face.models.generator import build_generator
from depth2face.models.discriminator import build_discriminator
from depth2face.models.checkpoint import load_checkpoint, save_checkpoint
from depth2face.losses.gan_losses import (
    LossConfig,
    adv_generator_loss,
    combined_generator_loss,
    discriminator_loss,
    mse_loss,
)
from depth2face.training import DetCGANTrainer, TrainConfig, evaluate, fit, predict
from depth2face.data import PairedSample, SynthSpec, synthesize_dataset
from depth2face.metrics import attribute_concordance, landmark_eval, recon_metrics
