"""Module to save and load networks, optimizer state and run metadata.

File layout (all integers little-endian):
    4 bytes   magic b"D2FC"
    u32       format version
    u64       header length in bytes
    header    UTF-8 JSON: layer specs, batch norm counters, tensor directory
              (name, shape, offset, count), step, optimizer hyperparameters,
              config snapshot, package version
    payload   IEEE-754 float32 tensors, offsets relative to the payload start
"""
import json
import os
import pathlib
import struct
import sys
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from depth2face.models import model_options
from depth2face.models.discriminator import DiscriminatorNet
from depth2face.models.generator import GeneratorNet
from depth2face.models.layers import LayerSpec
from depth2face.models.network import Network
from depth2face.tensor_core.tensor import CheckpointException, Depth2FaceException

if sys.version_info >= (3, 8):
    from importlib import metadata as pkg_metadata
else:
    import importlib_metadata as pkg_metadata

PREAMBLE = struct.Struct("<4sIQ")
PAYLOAD_DTYPE = np.dtype("<f4")
NETWORK_CLASSES = {
    "Network": Network,
    "GeneratorNet": GeneratorNet,
    "DiscriminatorNet": DiscriminatorNet,
}
OPTIMIZER_HYPERPARAMETERS = ("t", "lr", "beta1", "beta2", "eps")


def package_version() -> str:
    """Returns the installed version of depth2face."""
    try:
        return pkg_metadata.version("depth2face")
    except pkg_metadata.PackageNotFoundError:
        return "dev"


@dataclass
class Checkpoint:
    """Contents of a checkpoint file.
    optimizer_states maps a network name to {"t", "lr", "beta1", "beta2", "eps",
    "m": {parameter: array}, "v": {parameter: array}}."""

    networks: Dict[str, Network]
    step: int = 0
    optimizer_states: Dict[str, dict] = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    version: int = model_options.CHECKPOINT_VERSION
    package_version: str = "dev"

    def get_network(self, name: str) -> Network:
        """Returns a network by name."""
        if name not in self.networks:
            raise CheckpointException(
                f"Checkpoint holds no {name}, only {sorted(self.networks)}"
            )
        return self.networks[name]


def save_checkpoint(
    path: Union[str, pathlib.Path],
    networks: Dict[str, Network],
    step: int = 0,
    optimizer_states: Optional[Dict[str, dict]] = None,
    config: Optional[dict] = None,
) -> str:
    """Writes networks and optional optimizer state to path and returns the path.
    The file is replaced atomically so an interrupted write leaves the old one intact."""
    path = pathlib.Path(path)
    tensors = []
    header = {
        "networks": {},
        "tensors": [],
        "step": int(step),
        "optimizers": {},
        "config": config or {},
        "package_version": package_version(),
    }
    for name, network in networks.items():
        header["networks"][name] = {
            "class": type(network).__name__,
            "layers": [spec.to_dict() for spec in network.layer_specs],
            "running": {
                index: {"tracked": state.tracked}
                for index, state in network.running_states().items()
            },
        }
        for parameter, tensor in network.parameters().items():
            tensors.append((f"{name}/param/{parameter}", tensor.data))
        for index, state in network.running_states().items():
            tensors.append((f"{name}/running_mean/{index}", state.running_mean))
            tensors.append((f"{name}/running_var/{index}", state.running_var))
    for name, state in (optimizer_states or {}).items():
        header["optimizers"][name] = {key: state[key] for key in OPTIMIZER_HYPERPARAMETERS}
        for moment in ("m", "v"):
            for parameter, array in state[moment].items():
                tensors.append((f"optimizer/{name}/{moment}/{parameter}", array))

    offset = 0
    payload = []
    for name, array in tensors:
        raw = np.ascontiguousarray(array, dtype=PAYLOAD_DTYPE).tobytes()
        header["tensors"].append(
            {"name": name, "shape": list(array.shape), "offset": offset, "count": int(array.size)}
        )
        payload.append(raw)
        offset += len(raw)
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    temporary = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(temporary, "wb") as file:
            file.write(
                PREAMBLE.pack(
                    model_options.CHECKPOINT_MAGIC,
                    model_options.CHECKPOINT_VERSION,
                    len(header_bytes),
                )
            )
            file.write(header_bytes)
            for raw in payload:
                file.write(raw)
        os.replace(temporary, path)
    except OSError as error:
        raise CheckpointException(f"Cannot write checkpoint {path}: {error}") from error
    return str(path)


def _read_header(path: pathlib.Path, data: bytes):
    """Validates the preamble and returns (header, payload)."""
    if len(data) < PREAMBLE.size:
        raise CheckpointException(f"{path} is truncated: no checkpoint preamble")
    magic, version, header_length = PREAMBLE.unpack_from(data)
    if magic != model_options.CHECKPOINT_MAGIC:
        raise CheckpointException(f"{path} is not a depth2face checkpoint (magic {magic!r})")
    if version != model_options.CHECKPOINT_VERSION:
        raise CheckpointException(
            f"{path} has checkpoint version {version}, "
            f"this package reads version {model_options.CHECKPOINT_VERSION}"
        )
    end = PREAMBLE.size + header_length
    if len(data) < end:
        raise CheckpointException(f"{path} is truncated inside the header")
    try:
        header = json.loads(data[PREAMBLE.size : end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as error:
        raise CheckpointException(f"{path} has a corrupt header: {error}") from error
    return header, data[end:]


def _read_tensors(path: pathlib.Path, header: dict, payload: bytes) -> Dict[str, np.ndarray]:
    """Returns every tensor of the directory by name."""
    arrays = {}
    expected = 0
    for entry in header["tensors"]:
        start = entry["offset"]
        stop = start + entry["count"] * PAYLOAD_DTYPE.itemsize
        if stop > len(payload):
            raise CheckpointException(f"{path} is truncated inside tensor {entry['name']}")
        arrays[entry["name"]] = (
            np.frombuffer(payload[start:stop], dtype=PAYLOAD_DTYPE)
            .astype(np.float32)
            .reshape(entry["shape"])
        )
        expected = max(expected, stop)
    if len(payload) != expected:
        raise CheckpointException(
            f"{path} has {len(payload) - expected} unexpected trailing payload bytes"
        )
    return arrays


def _build_network(path: pathlib.Path, name: str, entry: dict, arrays: dict) -> Network:
    """Rebuilds one network from its header entry and tensors."""
    try:
        specs = [LayerSpec.from_dict(spec) for spec in entry["layers"]]
        network = NETWORK_CLASSES[entry["class"]](name, specs)
    except KeyError as error:
        raise CheckpointException(f"{path}: unknown network class {error}") from error
    except (Depth2FaceException, TypeError) as error:
        raise CheckpointException(f"{path}: invalid layer in {name}: {error}") from error
    for parameter, tensor in network.parameters().items():
        key = f"{name}/param/{parameter}"
        if key not in arrays or arrays[key].shape != tensor.shape:
            raise CheckpointException(f"{path}: missing or misshapen tensor {key}")
        tensor.data[...] = arrays[key]
    for index, state in network.running_states().items():
        state.running_mean = arrays[f"{name}/running_mean/{index}"].copy()
        state.running_var = arrays[f"{name}/running_var/{index}"].copy()
        state.tracked = int(entry["running"][index]["tracked"])
    return network


def load_checkpoint(path: Union[str, pathlib.Path]) -> Checkpoint:
    """Reads a checkpoint written by save_checkpoint."""
    path = pathlib.Path(path)
    try:
        data = path.read_bytes()
    except OSError as error:
        raise CheckpointException(f"Cannot read checkpoint {path}: {error}") from error
    header, payload = _read_header(path, data)
    try:
        arrays = _read_tensors(path, header, payload)
        networks = {
            name: _build_network(path, name, entry, arrays)
            for name, entry in header["networks"].items()
        }
        optimizer_states = {}
        for name, hyperparameters in header["optimizers"].items():
            state = dict(hyperparameters)
            for moment in ("m", "v"):
                prefix = f"optimizer/{name}/{moment}/"
                state[moment] = {
                    key[len(prefix) :]: array
                    for key, array in arrays.items()
                    if key.startswith(prefix)
                }
            optimizer_states[name] = state
        return Checkpoint(
            networks=networks,
            step=int(header["step"]),
            optimizer_states=optimizer_states,
            config=header["config"],
            package_version=header.get("package_version", "dev"),
        )
    except KeyError as error:
        raise CheckpointException(f"{path}: header is missing {error}") from error
