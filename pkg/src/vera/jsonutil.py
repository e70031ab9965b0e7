"""Canonical JSON encoding.

Every document the workbench persists or serves goes through this writer so
that identical content always produces identical bytes (provenance and the
byte-identical-rerun contract depend on it).
"""
import json
from typing import Any

import numpy as np


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, default=_plain)


def canonical_bytes(obj: Any) -> bytes:
    return (canonical_dumps(obj) + "\n").encode("utf-8")
