"""File to hold settings for reading, preprocessing and synthesising paired data."""
from depth2face.models import model_options

IMAGE_SIZE = model_options.IMAGE_SIZE

# Kinect-style 16-bit depth in millimeters; 0 marks an invalid measurement
D_MIN = 500
D_MAX = 1500
INVALID_DEPTH = 0

BINARY_THRESHOLD = 0.0

SPLITS = ("train", "test")
TRAIN_FRACTION = 0.8

# Synthetic dataset defaults
SYNTH_COUNT = 64
BLOB_MIN = 3
BLOB_MAX = 6
COLORMAP = "skin"
SHADING = 0.35

MANIFEST_NAME = "manifest.json"
LOAD_WORKERS = 4
