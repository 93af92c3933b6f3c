"""Versioned JSON reports with exact numbers.

Integers stay integers; ``Fraction`` values are written as strings such as
``"12/5"``; sets become sorted lists; objects with ``to_json`` are expanded.
Keys are emitted in insertion order and the output is deterministic.
"""
from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


def to_plain(obj: Any) -> Any:
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(to_plain(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if is_dataclass(obj):
        return to_plain(asdict(obj))
    if hasattr(obj, "item"):          # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def envelope(kind: str, body: Any, **meta) -> dict:
    doc = {"schema": "eqlist.report", "version": SCHEMA_VERSION, "kind": kind}
    doc.update({k: to_plain(v) for k, v in meta.items()})
    doc["result"] = to_plain(body)
    return doc


def report_emit(kind: str, body: Any, path: str | None = None, **meta) -> str:
    """Serialise a report; also write it to ``path`` when given."""
    text = json.dumps(envelope(kind, body, **meta), indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
