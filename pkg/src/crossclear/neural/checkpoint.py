"""Checkpoint persistence: one JSON document, bit-exact round-trips.

Layout:

    {
      "format": "crossclear-checkpoint",
      "format_version": 1,
      "config": { architecture hyperparameters },
      "normalization": {"mean": [...], "std": [...]} | null,
      "params": {
        "<name>": {"shape": [...], "encoding": "base64:<f8:C", "data": "..."}
      }
    }

Parameter arrays are base64 of their row-major little-endian float64
bytes, so save -> load -> save reproduces the file byte for byte
(Python's JSON float encoding is shortest-round-trip, covering the
normalization lists).
"""

from __future__ import annotations

import base64
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..errors import CheckpointError
from .model import HybridModel, ModelConfig, init_params
from .training import Normalization

FORMAT_MARKER = "crossclear-checkpoint"
FORMAT_VERSION = 1
_ENCODING = "base64:<f8:C"


def checkpoint_to_json(model: HybridModel) -> str:
    params = {}
    for name in sorted(model.params):
        arr = np.ascontiguousarray(model.params[name], dtype="<f8")
        params[name] = {
            "shape": list(arr.shape),
            "encoding": _ENCODING,
            "data": base64.b64encode(arr.tobytes(order="C")).decode("ascii"),
        }
    doc = {
        "format": FORMAT_MARKER,
        "format_version": FORMAT_VERSION,
        "config": asdict(model.config),
        "normalization": None if model.normalization is None else {
            "mean": [float(v) for v in model.normalization.mean],
            "std": [float(v) for v in model.normalization.std],
        },
        "params": params,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def checkpoint_from_json(text: str) -> HybridModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_MARKER:
        raise CheckpointError("missing format marker; not a checkpoint file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported format_version {doc.get('format_version')!r}"
        )
    try:
        config = ModelConfig(**doc["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"bad config block: {exc}") from None

    # The architecture fixes the exact parameter set; hold the file to it.
    expected = {name: arr.shape for name, arr in init_params(config, seed=0).items()}
    stored = doc.get("params")
    if not isinstance(stored, dict):
        raise CheckpointError("missing params block")
    missing = sorted(set(expected) - set(stored))
    extra = sorted(set(stored) - set(expected))
    if missing or extra:
        raise CheckpointError(
            f"parameter set does not match the config "
            f"(missing: {missing or 'none'}, unexpected: {extra or 'none'})"
        )

    params = {}
    for name, shape in expected.items():
        entry = stored[name]
        if entry.get("encoding") != _ENCODING:
            raise CheckpointError(f"{name}: unknown encoding {entry.get('encoding')!r}")
        if tuple(entry.get("shape", ())) != shape:
            raise CheckpointError(
                f"{name}: shape {entry.get('shape')} does not match {list(shape)}"
            )
        try:
            raw = base64.b64decode(entry["data"], validate=True)
        except Exception as exc:
            raise CheckpointError(f"{name}: bad base64 payload: {exc}") from None
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if len(raw) != 8 * count:
            raise CheckpointError(
                f"{name}: payload holds {len(raw)} bytes, expected {8 * count}"
            )
        params[name] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()

    norm = doc.get("normalization")
    normalization = None
    if norm is not None:
        try:
            normalization = Normalization(np.array(norm["mean"], dtype=np.float64),
                                          np.array(norm["std"], dtype=np.float64))
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"bad normalization block: {exc}") from None
        if normalization.mean.shape != (config.input_channels,):
            raise CheckpointError(
                f"normalization has {normalization.mean.shape[0]} channels, "
                f"config expects {config.input_channels}"
            )
    return HybridModel(config, params, normalization)


def save_checkpoint(model: HybridModel, path) -> Path:
    path = Path(path)
    path.write_text(checkpoint_to_json(model), encoding="utf-8")
    return path


def load_checkpoint(path) -> HybridModel:
    return checkpoint_from_json(Path(path).read_text(encoding="utf-8"))
