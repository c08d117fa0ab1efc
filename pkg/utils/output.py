"""
utils/output.py
Table, JSON and CSV renderers shared by the command handlers.
"""
import json
from typing import Any, Dict, List, Sequence

import pandas as pd

FORMATS = ("table", "json", "csv")


def format_float(value: float, digits: int = 6) -> str:
    """Human readable float with `digits` significant digits."""
    return f"{value:.{digits}g}"


def render_table(rows: List[Dict[str, Any]], columns: Sequence[str], digits: int = 6) -> str:
    """Fixed-width table, floats rounded to `digits` significant digits."""
    frame = pd.DataFrame(rows, columns=list(columns))
    if frame.empty:
        return "  ".join(columns)
    return frame.to_string(index=False, float_format=lambda v: format_float(v, digits))


def render_csv(rows: List[Dict[str, Any]], columns: Sequence[str]) -> str:
    """CSV with header; floats keep shortest round-trip precision."""
    frame = pd.DataFrame(rows, columns=list(columns))
    return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")


def render_json(payload: Any) -> str:
    return json.dumps(payload, indent=2)
