"""File to hold settings for the tensor engine."""

import os

DTYPE = "float32"
REDUCTION_DTYPE = "float64"

LEAKY_SLOPE = 0.2
BN_EPS = 1e-5
BN_MOMENTUM = 0.1
# Sigmoid outputs stay inside [SIGMOID_CLAMP, 1 - SIGMOID_CLAMP] so logs are finite
SIGMOID_CLAMP = 1e-7

ACTIVATIONS = ("leaky_relu", "relu", "tanh", "sigmoid")
STRIDES = (1, 2)

# Single-threaded BLAS keeps results bitwise stable; DEPTH2FACE_THREADS overrides
THREADS_VARIABLE = "DEPTH2FACE_THREADS"
THREAD_ENV_VARIABLES = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def pin_threads() -> None:
    """Sets the BLAS thread count. Only effective before numpy is first imported."""
    if THREADS_VARIABLE in os.environ:
        for variable in THREAD_ENV_VARIABLES:
            os.environ[variable] = os.environ[THREADS_VARIABLE]
    else:
        for variable in THREAD_ENV_VARIABLES:
            os.environ.setdefault(variable, "1")
