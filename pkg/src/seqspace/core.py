"""Validated domain types and sequence/parameter file I/O."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: Magnitudes at or below this count as zero for r_n, t_n and s_0. Entries
#: whose reciprocal overflows are rejected as zero as well.
ZERO_GUARD = 0.0


class SeqSpaceError(ValueError):
    """Base class for validation errors.

    ``reason`` is a one-line, space separated, machine-parsable summary used by
    the command line front end.
    """

    def __init__(self, *parts):
        self.parts = parts
        super().__init__(" ".join(str(p) for p in (type(self).__name__,) + parts))

    @property
    def reason(self):
        return str(self)


class ZeroEntry(SeqSpaceError):
    def __init__(self, which, index):
        self.which, self.index = which, index
        super().__init__(which, index)


class ZeroLeading(SeqSpaceError):
    def __init__(self, which="s"):
        self.which = which
        super().__init__(which)


class NonPositiveExponent(SeqSpaceError):
    def __init__(self, index):
        self.index = index
        super().__init__(index)


class ParseError(SeqSpaceError):
    def __init__(self, line, detail=""):
        self.line = line
        super().__init__(*((line, detail) if detail else (line,)))


class NonFiniteValue(SeqSpaceError):
    def __init__(self, index):
        self.index = index
        super().__init__(index)


class LengthMismatch(SeqSpaceError):
    pass


class IndexOutOfRange(SeqSpaceError):
    pass


def _readonly(values):
    arr = np.array(values, dtype=np.float64).ravel()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FiniteSequence:
    """Prefix ``x_0 .. x_{N-1}`` standing in for an infinite sequence."""

    values: np.ndarray

    def __post_init__(self):
        arr = _readonly(self.values)
        if arr.size < 1:
            raise LengthMismatch("empty sequence")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        object.__setattr__(self, "values", arr)

    @property
    def N(self):
        return self.values.size

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __getitem__(self, item):
        return self.values[item]


def as_sequence(x):
    return x if isinstance(x, FiniteSequence) else FiniteSequence(x)


def as_array(x):
    return x.values if isinstance(x, FiniteSequence) else np.asarray(x, dtype=np.float64)


@dataclass(frozen=True)
class GeneralizedMeansParams:
    """The triple (r, s, t) defining the generalized means matrix.

    ``r_inv`` holds the reciprocals 1/r_n actually used by the operators. It
    is computed from ``r`` unless a constructor supplies it exactly (the
    weighted-mean factory stores u_n directly).
    """

    r: np.ndarray
    s: np.ndarray
    t: np.ndarray
    r_inv: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in ("r", "s", "t"):
            arr = _readonly(getattr(self, name))
            if arr.size == 0:
                raise LengthMismatch(f"{name} is empty")
            bad = np.flatnonzero(~np.isfinite(arr))
            if bad.size:
                raise NonFiniteValue(int(bad[0]))
            object.__setattr__(self, name, arr)
        for name in ("r", "t"):
            arr = getattr(self, name)
            with np.errstate(divide="ignore", over="ignore"):
                small = np.flatnonzero((np.abs(arr) <= ZERO_GUARD) | ~np.isfinite(1.0 / arr))
            if small.size:
                raise ZeroEntry(name, int(small[0]))
        if abs(self.s[0]) <= ZERO_GUARD:
            raise ZeroLeading("s")
        if self.r_inv is None:
            object.__setattr__(self, "r_inv", _readonly(1.0 / self.r))
        else:
            object.__setattr__(self, "r_inv", _readonly(self.r_inv))
            if self.r_inv.size != self.r.size:
                raise LengthMismatch("r_inv and r differ in length")

    @property
    def length(self):
        """Largest truncation every prefix covers."""
        return min(self.r.size, self.s.size, self.t.size)

    def require(self, n):
        if n > self.length:
            raise LengthMismatch(f"params cover {self.length} terms, {n} requested")

    def to_json(self):
        return {"r": self.r.tolist(), "s": self.s.tolist(), "t": self.t.tolist()}


def validate_params(r, s, t):
    """Check r, t nowhere zero and s_0 nonzero; return the validated triple."""
    return GeneralizedMeansParams(r, s, t)


@dataclass(frozen=True)
class ExponentSequence:
    """Bounded positive exponents with their derived constants.

    ``conj`` holds p_k / (p_k - 1) on K2 and NaN on K1.
    """

    p: np.ndarray
    H: float = field(init=False)
    M: float = field(init=False)
    K1: np.ndarray = field(init=False)
    K2: np.ndarray = field(init=False)
    conj: np.ndarray = field(init=False)

    def __post_init__(self):
        arr = _readonly(self.p)
        if arr.size == 0:
            raise LengthMismatch("p is empty")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        nonpos = np.flatnonzero(arr <= 0)
        if nonpos.size:
            raise NonPositiveExponent(int(nonpos[0]))
        object.__setattr__(self, "p", arr)
        object.__setattr__(self, "H", float(arr.max()))
        object.__setattr__(self, "M", max(1.0, float(arr.max())))
        object.__setattr__(self, "K1", _readonly_int(np.flatnonzero(arr <= 1)))
        object.__setattr__(self, "K2", _readonly_int(np.flatnonzero(arr > 1)))
        conj = np.full(arr.size, np.nan)
        k2 = arr > 1
        conj[k2] = arr[k2] / (arr[k2] - 1.0)
        object.__setattr__(self, "conj", _readonly(conj))

    @property
    def N(self):
        return self.p.size

    @classmethod
    def constant(cls, value, n):
        return cls(np.full(n, float(value)))

    def prefix(self, n):
        if n > self.p.size:
            raise LengthMismatch(f"exponents cover {self.p.size} terms, {n} requested")
        return self if n == self.p.size else ExponentSequence(self.p[:n])

    @property
    def all_above_one(self):
        return self.K1.size == 0

    @property
    def all_at_most_one(self):
        return self.K2.size == 0


def _readonly_int(idx):
    arr = np.asarray(idx, dtype=np.int64)
    arr.flags.writeable = False
    return arr


def exponent_stats(p):
    return p if isinstance(p, ExponentSequence) else ExponentSequence(p)


@dataclass(frozen=True)
class TriangleMatrix:
    """Lower-triangular N x N block of an infinite matrix."""

    entries: np.ndarray
    operator: bool = False

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise LengthMismatch("triangle entries must be square")
        if np.any(np.triu(arr, 1) != 0):
            raise ValueError("entries above the diagonal must be zero")
        if self.operator and np.any(np.diag(arr) == 0):
            raise ValueError("operator triangle has a zero diagonal entry")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def N(self):
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, TriangleMatrix):
            return TriangleMatrix(np.tril(self.entries @ other.entries))
        return self.entries @ as_array(other)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


# --------------------------------------------------------------------------
# file I/O


def _check_finite(values):
    for i, v in enumerate(values):
        if not math.isfinite(v):
            raise NonFiniteValue(i)
    return values


def parse_csv(text):
    values = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        for cell in row:
            cell = cell.strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(lineno, repr(cell)) from None
    return values


def parse_json_array(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(data, list):
        raise ParseError(1, "expected a flat array")
    out = []
    for item in data:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ParseError(1, f"non-numeric entry {item!r}")
        out.append(float(item))
    return out


def _format_of(path, fmt):
    if fmt is not None:
        fmt = fmt.lower()
    else:
        fmt = Path(path).suffix.lstrip(".").lower() or "csv"
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported sequence format {fmt!r}")
    return fmt


def load_sequence(path, format=None):
    """Read a sequence prefix from a one-row CSV file or a flat JSON array."""
    fmt = _format_of(path, format)
    text = Path(path).read_text()
    values = parse_csv(text) if fmt == "csv" else parse_json_array(text)
    if not values:
        raise ParseError(1, "no values")
    return FiniteSequence(_check_finite(values))


def save_sequence(path, values, format=None):
    fmt = _format_of(path, format)
    values = [float(v) for v in as_array(values)]
    if fmt == "csv":
        Path(path).write_text(",".join(format_number(v) for v in values) + "\n")
    else:
        Path(path).write_text(json.dumps(values) + "\n")


def format_number(v):
    """Nine significant digits, the precision of every printed result."""
    return f"{v:.9g}"


def load_params(path):
    """Read ``{"r": [...], "s": [...], "t": [...], "p": [...]}``.

    Returns ``(params, p)`` where ``p`` is None if the file has no "p" key.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(data, dict):
        raise ParseError(1, "expected an object")
    missing = [k for k in ("r", "s", "t") if k not in data]
    if missing:
        raise ParseError(1, "missing key " + ",".join(missing))
    params = GeneralizedMeansParams(*(np.asarray(data[k], dtype=float) for k in ("r", "s", "t")))
    p = ExponentSequence(np.asarray(data["p"], dtype=float)) if "p" in data else None
    return params, p


def params_to_json(params, p=None):
    out = params.to_json()
    if p is not None:
        out["p"] = exponent_stats(p).p.tolist()
    return out
