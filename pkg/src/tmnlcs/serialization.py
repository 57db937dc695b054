"""State and report files.

Floats are written with 17 significant digits in lowercase scientific notation,
which round-trips every double exactly and makes output byte-deterministic.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import SchemaError
from .ladder import FockLadderState

FORMAT_VERSION = 1


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x!r}")
    return format(x, ".16e")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with fixed float formatting; keys keep insertion order."""
    return _dump(obj, indent, 0) + "\n"


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def state_to_dict(state: FockLadderState) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "charge_q": state.charge_q,
        "truncation_n": state.truncation_n,
        "amplitudes": [[float(c.real), float(c.imag)] for c in state.amplitudes],
        "converged": state.converged,
        "provenance": list(state.provenance),
    }


def state_from_dict(d: dict) -> FockLadderState:
    if not isinstance(d, dict):
        raise SchemaError("state document must be a JSON object")
    version = d.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {version!r}")
    try:
        q = d["charge_q"]
        n = d["truncation_n"]
        raw = d["amplitudes"]
        converged = d.get("converged", True)
        provenance = d.get("provenance", [])
    except KeyError as exc:
        raise SchemaError(f"state document lacks field {exc}") from None
    if not isinstance(q, int) or isinstance(q, bool) or q < 0:
        raise SchemaError("charge_q must be a non-negative integer")
    if not isinstance(raw, list) or not raw or any(not isinstance(p, list) or len(p) != 2 for p in raw):
        raise SchemaError("amplitudes must be a non-empty list of [re, im] pairs")
    if n != len(raw) - 1:
        raise SchemaError(f"truncation_n={n} does not match {len(raw)} amplitudes")
    if not isinstance(converged, bool) or not isinstance(provenance, list):
        raise SchemaError("converged must be a bool and provenance a list")
    try:
        amps = np.array([complex(float(re), float(im)) for re, im in raw])
    except (TypeError, ValueError):
        raise SchemaError("amplitudes must be numeric") from None
    if not np.all(np.isfinite(amps)):
        raise SchemaError("amplitudes must be finite")
    return FockLadderState(q, amps, converged=converged, provenance=tuple(provenance))


def dump_state(state: FockLadderState) -> str:
    return dumps(state_to_dict(state))


def load_state(text: str) -> FockLadderState:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return state_from_dict(d)


def csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value) if math.isfinite(value) else ""
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text
