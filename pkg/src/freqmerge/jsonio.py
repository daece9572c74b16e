"""Deterministic JSON output: sorted keys, 17-significant-digit floats.

Reports and CLI inspection output must diff textually across runs and
platforms, so floats use a fixed '%.17g' rendering (enough digits to
round-trip any double) and non-finite values map to null -- strict JSON
has no Infinity or NaN literals.
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["dumps_canonical"]


def _render(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, dict):
        return _render_object(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _render_object(mapping: dict) -> str:
    parts = [
        f"{json.dumps(str(key))}: {_render(mapping[key])}"
        for key in sorted(mapping)
    ]
    return "{" + ", ".join(parts) + "}"


def dumps_canonical(mapping: dict) -> str:
    """Serialize a mapping to one line of canonical JSON."""
    return _render_object(mapping)
