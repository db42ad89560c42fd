"""Canonical JSON: sorted keys, fixed 6-decimal floats, LF newlines.

Byte-stable across runs and platforms, so emitted documents diff cleanly and
request bodies hash reproducibly.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

FLOAT_DECIMALS = 6


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite float not serializable: {x}")
    s = f"{x:.{FLOAT_DECIMALS}f}"
    return "-0." + s[3:] if s.startswith("-0.") else s


def _write(obj: Any, out: list[str], indent: int) -> None:
    pad = "  " * indent
    if obj is None or isinstance(obj, bool):
        out.append({None: "null", True: "true", False: "false"}[obj])
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad + "  ")
            _write(item, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise TypeError(f"non-string key: {k!r}")
            out.append(pad + "  " + json.dumps(k, ensure_ascii=False) + ": ")
            _write(obj[k], out, indent + 1)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"not canonically serializable: {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    out: list[str] = []
    _write(obj, out, 0)
    out.append("\n")
    return "".join(out)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_dumps(obj).encode("utf-8")


def request_hash(obj: Any) -> str:
    """Stable sha256 over the canonical form; keys replay-transport entries."""
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()
