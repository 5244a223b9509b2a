"""File to hold settings for building and persisting the networks."""

IMAGE_SIZE = 64
DEPTH_CHANNELS = 1
RGB_CHANNELS = 3

KERNEL_SIZE = 5
# Shape-preserving for stride 1, halving for stride 2 at kernel 5
PADDING = 2
# Restores 32 -> 64 for the stride 1/2 transposed convolution
OUTPUT_PADDING = 1
# Full width; the other filter counts are multiples of it
BASE_FILTERS = 64

INIT_STD = 0.02

CHECKPOINT_MAGIC = b"D2FC"
CHECKPOINT_VERSION = 1
