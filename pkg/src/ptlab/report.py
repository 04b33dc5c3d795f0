"""Machine-readable JSON reports with deterministic layout.

Keys are sorted and every float is written with 17 significant digits, so
reports survive a text round trip bit-exactly and diff cleanly.
"""
from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .process import Process

SCHEMA_VERSION = 1


def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def to_plain(obj):
    """Convert numpy values and processes to JSON-ready Python values."""
    if isinstance(obj, Process):
        return {"dom": str(obj.dom), "cod": str(obj.cod), "matrix": to_plain(obj.transfer)}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) and np.abs(obj.imag).max(initial=0) > 0:
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return np.real(obj).tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with sorted keys and 17-digit floats."""

    def enc(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, float):
            return _float(v)
        if isinstance(v, (int, str)):
            return json.dumps(v)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(v[k], level + 1)}" for k in sorted(v)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, list):
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                return "[" + ", ".join(enc(x, level) for x in v) + "]"
            if not v:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in v) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(v).__name__}")

    return enc(to_plain(obj), 0)


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class Report:
    command: list
    input_digest: str | None = None
    verdicts: dict = field(default_factory=dict)
    holds: bool | None = None
    error: dict | None = None
    started: float = field(default_factory=time.perf_counter)

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": list(self.command),
            "input_sha256": self.input_digest,
            "verdicts": self.verdicts,
            "holds": self.holds,
            "timing": {"seconds": time.perf_counter() - self.started},
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())
