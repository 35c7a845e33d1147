"""JSON forms of matrices, channels, decompositions, dilations and schemes.

Every matrix is a list of rows and every entry a pair ``[re, im]``.  Floats
are written with ``repr`` precision so round trips are bit-exact.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .channels import DimensionError, KrausChannel, SubsystemDecomposition
from .complement import StinespringIsometry
from .secretshare import ThresholdScheme


class ParseError(ValueError):
    """Malformed JSON input."""


def matrix_to_json(m: np.ndarray) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj: Any) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"expected rows of [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(obj: dict, *keys: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ParseError(f"missing fields: {', '.join(missing)}")


def channel_to_json(c: KrausChannel) -> dict:
    return {"dim_in": c.dim_in, "dim_out": c.dim_out, "kraus": [matrix_to_json(k) for k in c.kraus]}


def channel_from_json(obj: dict) -> KrausChannel:
    _require(obj, "dim_in", "dim_out", "kraus")
    if not isinstance(obj["kraus"], list) or not obj["kraus"]:
        raise ParseError("kraus must be a nonempty list of matrices")
    ops = [matrix_from_json(k) for k in obj["kraus"]]
    for k in ops:
        if k.shape != (obj["dim_out"], obj["dim_in"]):
            raise DimensionError(f"Kraus operator of shape {k.shape}, declared {obj['dim_out']}x{obj['dim_in']}")
    return KrausChannel(np.stack(ops))


def decomposition_to_json(d: SubsystemDecomposition) -> dict:
    return {"dim_A": d.dim_A, "dim_B": d.dim_B, "embed": matrix_to_json(d.embed)}


def decomposition_from_json(obj: dict) -> SubsystemDecomposition:
    _require(obj, "dim_A", "dim_B", "embed")
    return SubsystemDecomposition(int(obj["dim_A"]), int(obj["dim_B"]), matrix_from_json(obj["embed"]))


def isometry_to_json(v: StinespringIsometry) -> dict:
    return {"dim_in": v.dim_in, "dim_out": v.dim_out, "dim_env": v.dim_env, "V": matrix_to_json(v.V)}


def isometry_from_json(obj: dict) -> StinespringIsometry:
    _require(obj, "dim_in", "dim_out", "dim_env", "V")
    return StinespringIsometry(int(obj["dim_in"]), int(obj["dim_out"]), int(obj["dim_env"]),
                               matrix_from_json(obj["V"]))


def scheme_to_json(s: ThresholdScheme) -> dict:
    out = {"k": s.k, "n": s.n, "secret_dim": s.secret_dim, "share_dims": list(s.share_dims)}
    if s.encoder.num_kraus == 1:
        out["encoder"] = matrix_to_json(s.encoder.kraus[0])
    else:
        out["encoder_kraus"] = [matrix_to_json(k) for k in s.encoder.kraus]
    return out


def scheme_from_json(obj: dict) -> ThresholdScheme:
    _require(obj, "k", "n", "secret_dim", "share_dims")
    if "encoder" in obj:
        enc = KrausChannel(matrix_from_json(obj["encoder"])[None])
    elif "encoder_kraus" in obj:
        enc = KrausChannel(np.stack([matrix_from_json(k) for k in obj["encoder_kraus"]]))
    else:
        raise ParseError("scheme needs an encoder matrix (or encoder_kraus list)")
    try:
        return ThresholdScheme(int(obj["k"]), int(obj["n"]), int(obj["secret_dim"]),
                               tuple(obj["share_dims"]), enc)
    except ValueError as exc:
        raise DimensionError(str(exc)) from None


def read_json(path: str | Path) -> tuple[Any, str]:
    """Parsed content and sha256 digest of the raw bytes."""
    raw = Path(path).read_bytes()
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n")
