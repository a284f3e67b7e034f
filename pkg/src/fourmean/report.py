"""Deterministic JSON/CSV output with an embedded run manifest."""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

FLOAT_DIGITS = 17
_MARK = "\x00f"
_MARK_RE = re.compile(r'"\\u0000f([^"]*)"')


def tool_version() -> str:
    from . import __version__
    return __version__


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.replace(microsecond=0).isoformat().replace("+00:00", "Z")


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    tool_version: str = field(default_factory=tool_version)
    timestamp: str = field(default_factory=_timestamp)

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config, "seed": self.seed,
                "tool_version": self.tool_version, "timestamp": self.timestamp}


def to_plain(obj):
    """Recursively convert numpy/complex/dataclass-ish values to JSON-ready data.

    Non-finite floats become ``None``; complex numbers become ``[re, im]``.
    """
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_plain(obj.real), to_plain(obj.imag)]
    return obj


def _mark_floats(obj):
    if isinstance(obj, float):
        return _MARK + format(obj, f".{FLOAT_DIGITS}g")
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_mark_floats(v) for v in obj]
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float printed at 17 significant digits."""
    text = json.dumps(_mark_floats(to_plain(obj)), indent=indent, sort_keys=False,
                      ensure_ascii=False)
    return _MARK_RE.sub(lambda m: _float_token(m.group(1)), text) + "\n"


def _float_token(s: str) -> str:
    # keep a decimal point or exponent so the value reads back as a float
    return s if any(c in s for c in ".eE") else s + ".0"


def document(manifest: RunManifest, payload: dict) -> dict:
    return {"manifest": manifest.to_json(), **payload}


def write_text(path, text: str) -> None:
    if path in (None, "-"):
        print(text, end="")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def csv_with_manifest(manifest: RunManifest, body: str) -> str:
    """Prefix a CSV body with a ``#``-comment line holding the manifest JSON."""
    head = dumps(manifest, indent=None).strip()
    return f"# manifest: {head}\n{body}"
