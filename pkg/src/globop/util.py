"""Small shared helpers: canonical ordering and canonical JSON text."""

from __future__ import annotations

import json


def canonical_key(x):
    """Total deterministic sort key over the heterogeneous cell values we use.

    Handles ints, strings, tuples, and any object exposing ``_sort_key_()``.
    """
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(canonical_key(v) for v in x))
    sk = getattr(x, "_sort_key_", None)
    if sk is not None:
        return (3, type(x).__name__, canonical_key(sk()))
    raise TypeError(f"no canonical order for {type(x).__name__}")


def canonical_json(data) -> str:
    """Stable single-line JSON used everywhere bytes must be reproducible."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))
