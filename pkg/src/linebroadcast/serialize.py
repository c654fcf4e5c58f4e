"""Deterministic JSON text: sorted keys, floats at 17 significant digits."""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Optional, Union

import numpy as np


class ReportIOError(OSError):
    """Writing a report or result failed; the message names the path."""


def fmt_float(v: float) -> str:
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialise non-finite number {v}")
    return format(v, ".17g")


def dumps(obj) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_text(text: str, path: Optional[Union[str, Path]]):
    """Write to ``path``, or stdout when path is None or '-'."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ReportIOError(f"{path}: {exc.strerror or exc}") from exc
