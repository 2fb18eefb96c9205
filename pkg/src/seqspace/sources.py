"""Matrix sources: dense blocks, a catalog of closed forms, and callables.

A source stands for an infinite matrix. ``block(rows, cols)`` returns its
leading ``rows x cols`` block; ``max_rows``/``max_cols`` are None when the
source can produce blocks of any size.
"""

import json
from pathlib import Path

import numpy as np

from .core import LengthMismatch, ParseError


class MatrixSource:
    max_rows = None
    max_cols = None
    description = "matrix"

    def _build(self, rows, cols):
        raise NotImplementedError

    def block(self, rows, cols):
        if self.max_rows is not None and rows > self.max_rows:
            raise LengthMismatch(f"source has {self.max_rows} rows, {rows} requested")
        if self.max_cols is not None and cols > self.max_cols:
            raise LengthMismatch(f"source has {self.max_cols} columns, {cols} requested")
        out = np.asarray(self._build(rows, cols), dtype=np.float64)
        if out.shape != (rows, cols):
            raise LengthMismatch(f"source built {out.shape}, expected {(rows, cols)}")
        return out


class DenseSource(MatrixSource):
    """A finite block; rows may be ragged (missing entries are zero)."""

    def __init__(self, entries):
        rows = [np.atleast_1d(np.asarray(r, dtype=np.float64)) for r in entries]
        if not rows:
            raise LengthMismatch("empty matrix")
        width = max(r.size for r in rows)
        dense = np.zeros((len(rows), width))
        for i, r in enumerate(rows):
            dense[i, : r.size] = r
        if not np.all(np.isfinite(dense)):
            raise ParseError(1, "non-finite matrix entry")
        self.entries = dense
        self.max_rows, self.max_cols = dense.shape
        self.description = f"dense {dense.shape[0]}x{dense.shape[1]}"

    def _build(self, rows, cols):
        return self.entries[:rows, :cols]


class FunctionSource(MatrixSource):
    """Wraps ``fn(rows, cols) -> ndarray``; results are cached at the largest size."""

    def __init__(self, fn, description="function", max_rows=None, max_cols=None):
        self.fn = fn
        self.description = description
        self.max_rows, self.max_cols = max_rows, max_cols
        self._cache = None

    def _build(self, rows, cols):
        c = self._cache
        if c is None or c.shape[0] < rows or c.shape[1] < cols:
            c = np.asarray(self.fn(rows, cols), dtype=np.float64)
            self._cache = c
        return c[:rows, :cols]


def _identity(rows, cols):
    return np.eye(rows, cols)


def _summation(rows, cols):
    return np.tril(np.ones((rows, cols)))


def generator(name, ratio=None, values=None):
    """Closed forms: identity, summation, diagonal-geometric, row-constant.

    ``row-constant`` puts v_n in every column k <= n of row n, where v comes
    from ``values`` (finitely many rows) or v_n = ratio**n.
    """
    if name == "identity":
        return FunctionSource(_identity, "identity")
    if name == "summation":
        return FunctionSource(_summation, "summation")
    if name == "diagonal-geometric":
        if ratio is None:
            raise ValueError("diagonal-geometric needs a ratio")
        rho = float(ratio)
        return FunctionSource(
            lambda r, c: np.eye(r, c) * rho ** np.arange(r)[:, None],
            f"diagonal-geometric({rho:g})")
    if name == "row-constant":
        if values is not None:
            v = np.asarray(values, dtype=np.float64)
            return FunctionSource(
                lambda r, c: np.tril(np.ones((r, c))) * v[:r, None],
                "row-constant(values)", max_rows=v.size)
        if ratio is None:
            raise ValueError("row-constant needs values or a ratio")
        rho = float(ratio)
        return FunctionSource(
            lambda r, c: np.tril(np.ones((r, c))) * rho ** np.arange(r)[:, None],
            f"row-constant(ratio={rho:g})")
    raise ValueError(f"unknown generator {name!r}")


def as_source(obj):
    if isinstance(obj, MatrixSource):
        return obj
    if callable(obj):
        return FunctionSource(obj)
    return DenseSource(obj)


def source_from_json(data):
    if "entries" in data:
        return DenseSource(data["entries"])
    if "generator" in data:
        return generator(data["generator"], ratio=data.get("ratio"), values=data.get("values"))
    raise ParseError(1, "matrix JSON needs 'entries' or 'generator'")


def load_matrix(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(data, dict):
        raise ParseError(1, "expected an object")
    return source_from_json(data)
