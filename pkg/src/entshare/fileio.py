"""State files (JSON), correlation data (CSV) and report emission."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .states import CorrelationDecomposition, DensityMatrix, StateInvariantError, StateVector


class StateFormatError(ValueError):
    """Malformed input file; ``field`` names the offending field or invariant."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _complex_list(data, field: str) -> np.ndarray:
    try:
        vals = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError):
        raise StateFormatError(field, "entries must be [re, im] number pairs") from None
    return np.array(vals, dtype=complex)


def state_from_dict(doc: dict) -> StateVector | DensityMatrix:
    if not isinstance(doc, dict):
        raise StateFormatError("document", "top level must be a JSON object")
    for key in ("dims", "kind", "data"):
        if key not in doc:
            raise StateFormatError(key, "missing")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d > 0 for d in dims):
        raise StateFormatError("dims", "must be a nonempty list of positive integers")
    kind = doc["kind"]
    if kind not in ("pure", "mixed"):
        raise StateFormatError("kind", f"must be 'pure' or 'mixed', got {kind!r}")
    if not isinstance(doc["data"], list):
        raise StateFormatError("data", "must be a list of [re, im] pairs")
    data = _complex_list(doc["data"], "data")
    size = math.prod(dims)
    try:
        if kind == "pure":
            if data.size != size:
                raise StateFormatError("data", f"expected {size} amplitudes, got {data.size}")
            return StateVector(data, tuple(dims))
        if data.size != size * size:
            raise StateFormatError("data", f"expected {size * size} matrix entries, got {data.size}")
        return DensityMatrix(data.reshape(size, size), tuple(dims))
    except StateInvariantError as exc:
        raise StateFormatError(exc.invariant, str(exc)) from None


def state_to_dict(state: StateVector | DensityMatrix) -> dict:
    if isinstance(state, StateVector):
        flat, kind = state.amplitudes, "pure"
    else:
        flat, kind = state.matrix.reshape(-1), "mixed"
    return {
        "dims": list(state.dims),
        "kind": kind,
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def load_state(path) -> StateVector | DensityMatrix:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError("json", f"line {exc.lineno}: {exc.msg}") from None
    return state_from_dict(doc)


def save_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state)) + "\n")


def parse_correlation_csv(text: str) -> CorrelationDecomposition:
    """Fifteen numbers: c row-major (9), then n_A (3), then n_B (3).

    Values may be spread over any number of rows. Blank lines, lines starting
    with ``#`` and a non-numeric header row are skipped.
    """
    values: list[float] = []
    for row in csv.reader(io.StringIO(text)):
        cells = [c.strip() for c in row if c.strip()]
        if not cells or cells[0].startswith("#"):
            continue
        try:
            values.extend(float(c) for c in cells)
        except ValueError:
            if values:
                raise StateFormatError("correlation", f"non-numeric value in row {row}") from None
            continue  # header
    if len(values) != 15:
        raise StateFormatError("correlation", f"expected 15 values (c, n_A, n_B), got {len(values)}")
    v = np.array(values)
    try:
        return CorrelationDecomposition(v[9:12], v[12:15], v[:9].reshape(3, 3))
    except ValueError as exc:
        raise StateFormatError("correlation", str(exc)) from None


def format_number(x: float) -> str:
    """12 significant digits, locale independent."""
    return format(float(x), ".12g")


def sweep_csv(rows) -> str:
    out = io.StringIO()
    out.write("p,tau_N,tau_R\n")
    for p, tn, tr in rows:
        out.write(f"{format_number(p)},{format_number(tn)},{format_number(tr)}\n")
    return out.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def dumps_report(report) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
