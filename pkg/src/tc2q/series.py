"""Result containers and file output.

Two table shapes exist: a concurrence-versus-time series (``t, omega_t, C``
plus optional ``u, v, std_error, leakage`` columns, in that order) and a
half-period sweep over the coupling (``spec, beta, C``).  Both write CSV with
12 significant digits or JSON with full doubles plus a config echo; files are
written atomically (temp file + rename) so a failed run never leaves a
partial artifact.

CSV files are exactly header + rows.  Because that leaves no room for
provenance, a CSV emit also drops ``<path>.meta.json`` alongside with the
same echo a JSON emit embeds.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import __version__

_OPTIONAL_COLUMNS = ("u", "v", "std_error", "leakage")


def _finite_1d(name: str, values, size: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if size is not None and arr.size != size:
        raise ValueError(f"{name} has length {arr.size}, expected {size}")
    return arr


@dataclass
class ConcurrenceSeries:
    """Concurrence on a time grid, with engine-dependent extra columns."""

    engine: str
    t: np.ndarray
    omega_t: np.ndarray
    concurrence: np.ndarray
    u: np.ndarray | None = None
    v: np.ndarray | None = None
    std_error: np.ndarray | None = None
    leakage: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.t = _finite_1d("t", self.t)
        n = self.t.size
        self.omega_t = _finite_1d("omega_t", self.omega_t, n)
        self.concurrence = _finite_1d("C", self.concurrence, n)
        if n > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("t must be strictly increasing")
        if self.concurrence.min() < 0.0 or self.concurrence.max() > 1.0:
            raise ValueError("concurrence values must lie in [0, 1]")
        for name in _OPTIONAL_COLUMNS:
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, _finite_1d(name, value, n))

    def columns(self) -> dict:
        """Ordered name -> array mapping of the populated columns."""
        cols = {"t": self.t, "omega_t": self.omega_t, "C": self.concurrence}
        for name in _OPTIONAL_COLUMNS:
            value = getattr(self, name)
            if value is not None:
                cols[name] = value
        return cols


@dataclass
class BetaSweep:
    """Half-period concurrence versus beta, one row per (oscillator, beta)."""

    labels: list
    beta: np.ndarray
    concurrence: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.beta = _finite_1d("beta", self.beta)
        self.concurrence = _finite_1d("C", self.concurrence, self.beta.size)
        if len(self.labels) != self.beta.size:
            raise ValueError("labels and beta must have the same length")
        if self.concurrence.min() < 0.0 or self.concurrence.max() > 1.0:
            raise ValueError("concurrence values must lie in [0, 1]")

    def columns(self) -> dict:
        return {"spec": list(self.labels), "beta": self.beta, "C": self.concurrence}


def _atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def _csv_text(columns: dict) -> str:
    names = list(columns)
    n_rows = len(next(iter(columns.values())))
    lines = [",".join(names)]
    for i in range(n_rows):
        lines.append(",".join(_format_cell(columns[name][i]) for name in names))
    return "\n".join(lines) + "\n"


def write_table(table, path: str, fmt: str = "csv") -> None:
    """Emit a series or sweep to ``path`` as ``csv`` or ``json``, atomically."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    columns = table.columns()
    meta = dict(getattr(table, "meta", {}) or {})
    engine = getattr(table, "engine", meta.get("engine"))
    if fmt == "csv":
        _atomic_write_text(path, _csv_text(columns))
        sidecar = {"artifact_version": __version__, "engine": engine, "meta": meta}
        _atomic_write_text(path + ".meta.json", json.dumps(sidecar, indent=2) + "\n")
        return
    payload = {
        "artifact_version": __version__,
        "engine": engine,
        "meta": meta,
        "columns": {name: (list(vals) if isinstance(vals, list) else vals.tolist())
                    for name, vals in columns.items()},
    }
    _atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def read_series(path: str) -> ConcurrenceSeries:
    """Read back a concurrence series written by :func:`write_table`."""
    if path.endswith(".json"):
        with open(path) as handle:
            payload = json.load(handle)
        cols = {name: np.asarray(vals, dtype=float)
                for name, vals in payload["columns"].items()}
        engine = payload.get("engine") or "unknown"
        meta = payload.get("meta", {})
    else:
        with open(path) as handle:
            lines = [line for line in handle.read().splitlines() if line]
        names = lines[0].split(",")
        data = np.array([[float(cell) for cell in line.split(",")]
                         for line in lines[1:]])
        cols = {name: data[:, i] for i, name in enumerate(names)}
        meta, engine = {}, "unknown"
        if os.path.exists(path + ".meta.json"):
            with open(path + ".meta.json") as handle:
                sidecar = json.load(handle)
            meta = sidecar.get("meta", {})
            engine = sidecar.get("engine") or "unknown"
    return ConcurrenceSeries(
        engine=engine,
        t=cols["t"],
        omega_t=cols["omega_t"],
        concurrence=cols["C"],
        u=cols.get("u"),
        v=cols.get("v"),
        std_error=cols.get("std_error"),
        leakage=cols.get("leakage"),
        meta=meta,
    )
