"""Checkpoint container.

Layout::

    MRP1\n
    <header length in bytes>\n
    <header: UTF-8 JSON with version, config, vocab and tensor manifest>
    <payload: little-endian float32 tensors at the manifest offsets>
"""

from __future__ import annotations

import json

import numpy as np
import torch

from ..errors import CheckpointFormatError, CheckpointVersionError
from .config import ModelConfig, config_dict
from .parser import Parser
from .vocab import Vocab

MAGIC = b"MRP1"
FORMAT_VERSION = 1


def save(parser: Parser, path):
    manifest, payload, offset = [], [], 0
    for name, tensor in parser.net.state_dict().items():
        data = tensor.detach().cpu().numpy().astype("<f4").tobytes()
        manifest.append({"name": name, "dtype": "float32", "shape": list(tensor.shape),
                         "offset": offset})
        payload.append(data)
        offset += len(data)
    header = json.dumps({
        "version": FORMAT_VERSION,
        "config": config_dict(parser.config),
        "vocab": parser.vocab.to_dict(),
        "tensors": manifest,
        "payload_bytes": offset,
    }, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC + b"\n")
        f.write(str(len(header)).encode() + b"\n")
        f.write(header)
        for chunk in payload:
            f.write(chunk)


def load(path, version: int = FORMAT_VERSION) -> Parser:
    """Read a checkpoint; ``version`` is the format this reader understands."""
    with open(path, "rb") as f:
        blob = f.read()
    if not blob.startswith(MAGIC + b"\n"):
        raise CheckpointFormatError(f"{path}: not a model file (bad magic)")
    rest = blob[len(MAGIC) + 1:]
    size, sep, rest = rest.partition(b"\n")
    if not sep or not size.isdigit() or len(rest) < int(size):
        raise CheckpointFormatError(f"{path}: truncated or corrupt header")
    try:
        header = json.loads(rest[: int(size)].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise CheckpointFormatError(f"{path}: corrupt header ({err})") from None
    if header.get("version") != version:
        raise CheckpointVersionError(
            f"{path}: format version {header.get('version')}, this reader handles {version}")
    payload = rest[int(size):]
    if len(payload) != header["payload_bytes"]:
        raise CheckpointFormatError(
            f"{path}: payload is {len(payload)} bytes, header says {header['payload_bytes']}")
    parser = Parser(ModelConfig(**header["config"]), Vocab.from_dict(header["vocab"]))
    expected = parser.net.state_dict()
    names = [t["name"] for t in header["tensors"]]
    if sorted(names) != sorted(expected) or len(set(names)) != len(names):
        raise CheckpointFormatError(f"{path}: tensor manifest does not match the model")
    state = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        if shape != tuple(expected[entry["name"]].shape):
            raise CheckpointFormatError(f"{path}: tensor {entry['name']} has shape {shape}")
        count = int(np.prod(shape))
        start = entry["offset"]
        raw = payload[start: start + 4 * count]
        if len(raw) != 4 * count:
            raise CheckpointFormatError(f"{path}: tensor {entry['name']} truncated")
        state[entry["name"]] = torch.from_numpy(np.frombuffer(raw, dtype="<f4").copy().reshape(shape))
    parser.net.load_state_dict(state)
    parser.net.eval()
    return parser
