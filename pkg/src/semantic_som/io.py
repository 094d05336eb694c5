"""SOMNET1 network files and their JSON sidecars.

Layout of a ``.somnet`` file::

    b"SOMNET1\\n"
    4 x uint32 LE     domain rows, domain cols, image rows, image cols
    m*n x float64 LE  weights, image-neuron-major

The sidecar lives at ``<path>.meta.json``.
"""
from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from .errors import NetworkFormatError
from .som import GridShape, SomNetwork

MAGIC = b"SOMNET1\n"
_HEADER = struct.Struct("<4I")


def save_network(network: SomNetwork, path) -> None:
    d, i = network.domain_shape, network.image_shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(d.rows, d.cols, i.rows, i.cols))
        fh.write(np.ascontiguousarray(network.weights, dtype="<f8").tobytes())


def load_network(path) -> SomNetwork:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise NetworkFormatError(f"{path}: not a SOMNET1 file")
    offset = len(MAGIC)
    if len(data) < offset + _HEADER.size:
        raise NetworkFormatError(f"{path}: truncated header")
    dr, dc, ir, ic = _HEADER.unpack_from(data, offset)
    offset += _HEADER.size
    try:
        domain, image = GridShape(dr, dc), GridShape(ir, ic)
    except ValueError as exc:
        raise NetworkFormatError(f"{path}: {exc}") from None
    expected = domain.size * image.size * 8
    if len(data) - offset != expected:
        raise NetworkFormatError(
            f"{path}: expected {expected} bytes of weights, found {len(data) - offset}"
        )
    weights = np.frombuffer(data, dtype="<f8", offset=offset).reshape(image.size, domain.size)
    return SomNetwork(domain, image, weights.astype(np.float64))


def meta_path(path) -> Path:
    return Path(str(path) + ".meta.json")


def dump_json(obj, path) -> None:
    """Deterministic JSON: sorted keys, fixed indent, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # the single-stimulus margin sentinel (and any other inf) becomes null
        return float(obj) if math.isfinite(obj) else None
    return obj


def save_meta(path, schedule=None, stimuli=None, extra=None) -> None:
    meta = {"format": "SOMNET1"}
    if schedule is not None:
        meta["schedule"] = schedule.to_dict()
    if stimuli is not None:
        meta["stimulus_checksum"] = stimuli.checksum()
        meta["stimulus_ids"] = stimuli.ids
    if extra:
        meta.update(extra)
    dump_json(meta, meta_path(path))


def load_meta(path) -> dict:
    with open(meta_path(path), encoding="utf-8") as fh:
        return json.load(fh)
