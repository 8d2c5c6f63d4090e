"""Deterministic CSV/JSON emission and flat config files.

Floats are written with 17 significant digits (lossless for binary64) and
NaN or infinities abort serialization instead of leaking into output.
Field order is fixed by the caller (insertion order for JSON objects), so
a repeated run produces byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Any

import numpy as np

from .errors import SerializationError, ValidationError

CONFIG_KEYS = ("v", "w", "a", "v0", "w0", "L", "dx")

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    """17-significant-digit decimal form; rejects NaN and infinities."""
    x = float(x)
    if not math.isfinite(x):
        raise SerializationError(f"non-finite value {x!r} in output")
    return format(x, ".17g")


@dataclass
class Table:
    """Named columns over a 2-d array of floats; the CSV payload shape."""

    columns: list[str]
    rows: np.ndarray

    def __post_init__(self) -> None:
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.columns):
            raise ValidationError(
                f"rows must be (n, {len(self.columns)}), got {self.rows.shape}"
            )


def emit_csv(table: Table, stream: IO[str]) -> None:
    """Header plus one line per row, newline-terminated, no trailing padding."""
    stream.write(",".join(table.columns) + "\n")
    for row in table.rows:
        stream.write(",".join(format_float(x) for x in row) + "\n")


def _json_scalar(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        out = value.replace("\\", "\\\\").replace('"', '\\"')
        for ch, esc in (("\n", "\\n"), ("\r", "\\r"), ("\t", "\\t")):
            out = out.replace(ch, esc)
        return f'"{out}"'
    raise SerializationError(f"cannot serialize {type(value).__name__} to JSON")


def _json_value(value: Any) -> str:
    if isinstance(value, dict):
        items = ", ".join(f'{_json_scalar(str(k))}: {_json_value(v)}' for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        return "[" + ", ".join(_json_value(v) for v in seq) + "]"
    return _json_scalar(value)


def emit_json(payload: dict, stream: IO[str]) -> None:
    """One-line JSON document in insertion order, newline-terminated."""
    stream.write(_json_value(payload) + "\n")


def complex_fields(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


@dataclass
class ResultEnvelope:
    """What a JSON-producing run writes: schema version, input echo, payload.

    Timing never enters the payload (reruns must be byte-identical); the
    CLI reports elapsed time on stderr instead.
    """

    inputs: dict
    result: dict
    schema: int = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)

    def payload(self) -> dict:
        doc = {"schema": self.schema, "inputs": self.inputs}
        doc.update(self.extra)
        doc["result"] = self.result
        return doc


def load_config(path: str) -> dict[str, float]:
    """Flat key = value parameter file; keys limited to v, w, a, v0, w0, L, dx.

    Blank lines and lines starting with '#' are ignored.
    """
    out: dict[str, float] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ValidationError(
                f"{path}:{lineno}: unknown key {key!r} (allowed: {', '.join(CONFIG_KEYS)})"
            )
        try:
            out[key] = float(val.strip())
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: {val.strip()!r} is not a number") from None
    return out
