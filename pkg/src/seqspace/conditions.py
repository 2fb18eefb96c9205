"""Truncation-honest evaluation of the matrix conditions (4.4)-(4.29).

None of these conditions can be decided from finitely many entries. Each one
is evaluated on three nested truncations (N, 2N, 4N) and the finite values
are classified:

* ``HoldsUpToBound``: the bound settles (the last doubling changes it by
  less than 10%), or a "lim = 0" tail keeps shrinking by at least 10% per
  doubling;
* ``DivergenceSuspected``: the value more than doubles at both doublings;
* ``Inconclusive``: anything else, including overflow.

One generic evaluator walks a table of :class:`ConditionSpec` rows; the
quantifiers over L and N are handled by search (existential) or sampling
(universal) around the same bodies.
"""

import itertools
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import _kernels
from .core import SeqSpaceError, exponent_stats
from .sources import as_source

#: Ratio below which a doubling counts as stable.
STABLE_RATIO = 1.1
#: Ratio above which a doubling counts as growth.
GROWTH_RATIO = 2.0
#: Tail values at or below this fraction of the row maximum count as zero.
ZERO_TOL = 1e-12
#: Fewest rows the largest truncation may have.
MIN_ROWS = 8


class UnknownCondition(SeqSpaceError):
    pass


class InsufficientTruncation(SeqSpaceError):
    pass


class Status(str, Enum):
    HOLDS = "HoldsUpToBound"
    DIVERGES = "DivergenceSuspected"
    INCONCLUSIVE = "Inconclusive"

    @property
    def severity(self):
        return _SEVERITY[self]

    @property
    def exit_code(self):
        return {Status.HOLDS: 0, Status.DIVERGES: 1, Status.INCONCLUSIVE: 3}[self]


_SEVERITY = {Status.HOLDS: 0, Status.INCONCLUSIVE: 1, Status.DIVERGES: 2}


def worst(statuses):
    return max(statuses, key=lambda s: s.severity, default=Status.HOLDS)


@dataclass(frozen=True)
class Bounds:
    """Truncation and search limits.

    ``n_rows`` is the smallest truncation; the evaluator also looks at twice
    and four times as many rows. ``n_cols`` defaults to ``n_rows``.
    """

    n_rows: int = 16
    n_cols: int = None
    l_max: int = 2 ** 20
    f_max: int = 12

    def __post_init__(self):
        for name in ("n_rows", "l_max", "f_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.n_cols is not None and self.n_cols < 1:
            raise ValueError("n_cols must be positive")

    @property
    def search_grid(self):
        out, v = [], 1
        while v < self.l_max:
            out.append(v)
            v *= 2
        out.append(self.l_max)
        return out

    @property
    def samples(self):
        return sorted({1, 2, self.l_max})


@dataclass(frozen=True)
class LimitEstimate:
    """Estimated limits alpha_k, averaged over ``estimation_rows`` = (start, stop)."""

    alpha: tuple
    estimation_rows: tuple
    columns: int

    def to_json(self):
        return {"alpha": list(self.alpha), "estimation_rows": list(self.estimation_rows),
                "columns": self.columns}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["alpha"]), tuple(data["estimation_rows"]), data["columns"])


@dataclass(frozen=True)
class Verdict:
    status: Status
    bound_value: float
    witness: dict = field(default_factory=dict)
    L_or_N: dict = None
    diagnostic: tuple = ()
    levels: tuple = ()
    label: str = ""
    limit_estimate: LimitEstimate = None
    components: tuple = ()
    notes: tuple = ()

    @property
    def exit_code(self):
        return self.status.exit_code

    def to_json(self):
        return {
            "label": self.label,
            "status": self.status.value,
            "bound_value": _num(self.bound_value),
            "witness": self.witness,
            "L_or_N": self.L_or_N,
            "diagnostic": [_num(v) for v in self.diagnostic],
            "levels": [list(lv) for lv in self.levels],
            "limit_estimate": None if self.limit_estimate is None else self.limit_estimate.to_json(),
            "components": [c.to_json() for c in self.components],
            "notes": list(self.notes),
        }

    def dumps(self, **kw):
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data):
        le = data.get("limit_estimate")
        return cls(
            status=Status(data["status"]),
            bound_value=float(data["bound_value"]),
            witness=data.get("witness") or {},
            L_or_N=data.get("L_or_N"),
            diagnostic=tuple(float(v) for v in data.get("diagnostic", ())),
            levels=tuple(tuple(lv) for lv in data.get("levels", ())),
            label=data.get("label", ""),
            limit_estimate=None if le is None else LimitEstimate.from_json(le),
            components=tuple(cls.from_json(c) for c in data.get("components", ())),
            notes=tuple(data.get("notes", ())),
        )


def _num(v):
    # JSON has no inf/nan; keep them as strings that float() reads back
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def conjunction(label, verdicts, notes=()):
    """All of ``verdicts`` at once: worst status, largest bound."""
    verdicts = tuple(verdicts)
    if not verdicts:
        return Verdict(Status.HOLDS, 0.0, label=label, notes=tuple(notes))
    bound = max(v.bound_value for v in verdicts)
    return Verdict(worst(v.status for v in verdicts), bound, label=label,
                   witness={"bounds": {v.label: _num(v.bound_value) for v in verdicts}},
                   components=verdicts, notes=tuple(notes))


# --------------------------------------------------------------------------
# the condition table


@dataclass(frozen=True)
class ConditionSpec:
    """One row of the condition table.

    shape     body skeleton, see ``SHAPES``
    cols      "K1", "K2" or None (all columns)
    L, N      None, "exists" or "forall"
    l_expo    L enters as L**(l_expo / q_n), or L**l_expo when uses_q is off
    n_expo    N enters as N**n_expo (rowsum-conj) or N**(n_expo / p_k)
    alpha     None, "column" (alpha_k) or "scalar"
    outer_q   raise the row quantity to q_n
    """

    id: str
    shape: str
    display: str
    cols: str = None
    L: str = None
    N: str = None
    l_expo: float = 0.0
    n_expo: float = 0.0
    alpha: str = None
    outer_q: bool = False

    @property
    def uses_q(self):
        return self.outer_q or self.shape.startswith("lim") or (self.L is not None and self.shape != "sum-F-rows")

    @property
    def uses_K1K2(self):
        return self.cols is not None

    @property
    def kind(self):
        return "limit" if self.shape.startswith("lim") else "bound"


SHAPES = (
    "sup-F-cols",        # sup_F sup_k |sum_{n in F} a_nk|^{p_k}
    "sum-F-rows",        # sup_F sum_k |sum_{n in F} a_nk / L|^{p'_k}
    "sum-F-cols",        # sup_F sum_n |sum_{k in F} a_nk N^{e/p_k}|
    "lim-entry",         # lim_n |a_nk - alpha_k|^{q_n} = 0 for each k
    "sup-entry",         # sup_n sup_k (|a_nk - alpha_k| L^{e/q_n})^{p_k}
    "sup-rowsum-conj",   # sup_n sum_k (|a_nk - alpha_k| L^{e/q_n} N^{-1})^{p'_k}
    "sup-rowsum",        # sup_n L^{1/q_n} (sum_k |a_nk - alpha_k| N^{e/p_k})^{q_n or 1}
    "lim-rowsum",        # lim_n (sum_k |a_nk - alpha_k| N^{e/p_k})^{q_n} = 0
    "sum-rows",          # sum_n |sum_k a_nk|
    "sup-rowtotal",      # sup_n |sum_k a_nk|^{q_n}
    "lim-rowtotal",      # lim_n |sum_k a_nk - alpha|^{q_n} = 0
)

_TABLE = (
    ConditionSpec("4.4", "sup-F-cols", "sup_F sup_{k in K1} |sum_{n in F} a_nk|^{p_k}", cols="K1"),
    ConditionSpec("4.5", "sum-F-rows", "exists L: sup_F sum_{k in K2} |sum_{n in F} a_nk L^-1|^{p'_k}",
                  cols="K2", L="exists", l_expo=-1.0),
    ConditionSpec("4.6", "lim-entry", "lim_n |a_nk|^{q_n} = 0 for all k"),
    ConditionSpec("4.7", "sup-entry", "for all L: sup_n sup_{k in K1} |a_nk L^{1/q_n}|^{p_k}",
                  cols="K1", L="forall", l_expo=1.0),
    ConditionSpec("4.8", "sup-rowsum-conj",
                  "for all L exists N: sup_n sum_{k in K2} |a_nk L^{1/q_n} N^-1|^{p'_k}",
                  cols="K2", L="forall", N="exists", l_expo=1.0, n_expo=-1.0),
    ConditionSpec("4.9", "sup-entry", "sup_n sup_{k in K1} |a_nk|^{p_k}", cols="K1"),
    ConditionSpec("4.10", "sup-rowsum-conj", "exists N: sup_n sum_{k in K2} |a_nk N^-1|^{p'_k}",
                  cols="K2", N="exists", n_expo=-1.0),
    ConditionSpec("4.11", "lim-entry", "exists (alpha_k): lim_n |a_nk - alpha_k|^{q_n} = 0",
                  alpha="column"),
    ConditionSpec("4.12", "sup-entry",
                  "exists (alpha_k) for all L: sup_n sup_{k in K1} (|a_nk - alpha_k| L^{1/q_n})^{p_k}",
                  cols="K1", L="forall", l_expo=1.0, alpha="column"),
    ConditionSpec("4.13", "sup-rowsum-conj",
                  "exists (alpha_k) for all L exists N: "
                  "sup_n sum_{k in K2} (|a_nk - alpha_k| L^{1/q_n} N^-1)^{p'_k}",
                  cols="K2", L="forall", N="exists", l_expo=1.0, n_expo=-1.0, alpha="column"),
    ConditionSpec("4.14", "sup-entry", "exists L: sup_n sup_{k in K1} |a_nk L^{-1/q_n}|^{p_k}",
                  cols="K1", L="exists", l_expo=-1.0),
    ConditionSpec("4.15", "sup-rowsum-conj", "exists L: sup_n sum_{k in K2} |a_nk L^{-1/q_n}|^{p'_k}",
                  cols="K2", L="exists", l_expo=-1.0),
    ConditionSpec("4.16", "sum-F-cols", "exists N: sup_F sum_n |sum_{k in F} a_nk N^{-1/p_k}|",
                  N="exists", n_expo=-1.0),
    ConditionSpec("4.17", "sup-rowsum", "for all L exists N: sup_n L^{1/q_n} sum_k |a_nk| N^{-1/p_k}",
                  L="forall", N="exists", l_expo=1.0, n_expo=-1.0),
    ConditionSpec("4.18", "sup-rowsum", "exists N: sup_n sum_k |a_nk| N^{-1/p_k}",
                  N="exists", n_expo=-1.0),
    ConditionSpec("4.19", "sup-rowsum",
                  "exists (alpha_k) for all L exists N: sup_n L^{1/q_n} sum_k |a_nk - alpha_k| N^{-1/p_k}",
                  L="forall", N="exists", l_expo=1.0, n_expo=-1.0, alpha="column"),
    ConditionSpec("4.20", "sup-rowsum", "exists N: sup_n (sum_k |a_nk| N^{-1/p_k})^{q_n}",
                  N="exists", n_expo=-1.0, outer_q=True),
    ConditionSpec("4.21", "sum-rows", "sum_n |sum_k a_nk|"),
    ConditionSpec("4.22", "lim-rowtotal", "lim_n |sum_k a_nk|^{q_n} = 0"),
    ConditionSpec("4.23", "lim-rowtotal", "exists alpha: lim_n |sum_k a_nk - alpha|^{q_n} = 0",
                  alpha="scalar"),
    ConditionSpec("4.24", "sup-rowtotal", "sup_n |sum_k a_nk|^{q_n}", outer_q=True),
    ConditionSpec("4.25", "sum-F-cols", "for all N: sup_F sum_n |sum_{k in F} a_nk N^{1/p_k}|",
                  N="forall", n_expo=1.0),
    ConditionSpec("4.26", "lim-rowsum", "for all N: lim_n (sum_k |a_nk| N^{1/p_k})^{q_n} = 0",
                  N="forall", n_expo=1.0, outer_q=True),
    ConditionSpec("4.27", "sup-rowsum", "for all N: sup_n sum_k |a_nk| N^{1/p_k}",
                  N="forall", n_expo=1.0),
    ConditionSpec("4.28", "lim-rowsum",
                  "exists (alpha_k) for all N: lim_n (sum_k |a_nk - alpha_k| N^{1/p_k})^{q_n} = 0",
                  N="forall", n_expo=1.0, alpha="column", outer_q=True),
    ConditionSpec("4.29", "sup-rowsum", "for all N: sup_n (sum_k |a_nk| N^{1/p_k})^{q_n}",
                  N="forall", n_expo=1.0, outer_q=True),
)

CONDITIONS = {c.id: c for c in _TABLE}


def get_condition(cid):
    if isinstance(cid, ConditionSpec):
        return cid
    key = str(cid).strip().strip("()")
    if key not in CONDITIONS:
        raise UnknownCondition(key)
    return CONDITIONS[key]


# --------------------------------------------------------------------------
# classification


def classify(values, kind, zero_scale=0.0):
    """Status of a three-level trace.

    ``zero_scale`` is the magnitude a "lim" tail is compared against when
    deciding whether it is numerically zero.
    """
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)):
        return Status.INCONCLUSIVE, "non-finite value"
    if kind == "limit":
        if v[-1] <= ZERO_TOL * max(zero_scale, 1.0) and v[-1] <= v[0]:
            return Status.HOLDS, "tail numerically zero"
        shrink = all(v[i + 1] * STABLE_RATIO < v[i] for i in range(len(v) - 1))
        if shrink:
            return Status.HOLDS, "tail shrinking"
    else:
        if v[-1] == 0.0:
            return Status.HOLDS, "zero"
        if v[-1] < STABLE_RATIO * v[-2]:
            return Status.HOLDS, "stable"
    if all(v[i + 1] > GROWTH_RATIO * v[i] for i in range(len(v) - 1)):
        return Status.DIVERGES, "growing"
    return Status.INCONCLUSIVE, "neither stable nor growing"


# --------------------------------------------------------------------------
# F-quantified sups


def _pow(m, e):
    # libm pow like a per-subset evaluation, but inf instead of OverflowError
    try:
        return float(m) ** float(e)
    except OverflowError:
        return math.inf


def sign_split_sup(b, expo):
    """sum_k max(sum_n b_nk^+, sum_n b_nk^-)^{expo_k}.

    For one column this is the exact sup over row subsets F of
    |sum_{n in F} b_nk|^{expo_k}; for several columns it bounds the coupled
    sup from above.
    """
    b = np.asarray(b, dtype=float)
    expo = np.asarray(expo, dtype=float)
    pos = np.array([math.fsum(col[col > 0]) for col in b.T])
    neg = np.array([math.fsum(-col[col < 0]) for col in b.T])
    # scalar pow, so the result is bit-identical to a per-subset evaluation
    return np.array([_pow(m, e) for m, e in zip(np.maximum(pos, neg), expo)])


def _subset_value(b, expo, rows):
    return float(np.sum(np.abs(b[list(rows)].sum(axis=0)) ** expo)) if len(rows) else 0.0


def subset_sup(b, expo, f_max):
    """sup over row subsets F of sum_k |sum_{n in F} b_nk|^{expo_k}.

    Exact (exhaustive) when b has at most f_max + 1 rows. Otherwise the result
    is a lower bound: exhaustive over the first f_max + 1 rows, then a set of
    sign-pattern candidates over all rows.

    Returns (value, rows of the best F, exact).
    """
    b = np.ascontiguousarray(b, dtype=float)
    expo = np.ascontiguousarray(expo, dtype=float)
    n = b.shape[0]
    if b.shape[1] == 0 or n == 0:
        return 0.0, [], True
    head = min(n, f_max + 1)
    value, mask = _kernels.subset_max(np.ascontiguousarray(b[:head]), expo)
    best = [i for i in range(head) if (int(mask) >> i) & 1]
    if n == head:
        return float(value), best, True
    cands = [b[:, k] > 0 for k in range(b.shape[1])]
    cands += [b[:, k] < 0 for k in range(b.shape[1])]
    cands.append(np.ones(n, dtype=bool))
    member = np.array(cands, dtype=float)
    vals = np.sum(np.abs(member @ b) ** expo[None, :], axis=1)
    i = int(np.argmax(vals))
    if vals[i] > value:
        value, best = float(vals[i]), np.flatnonzero(member[i]).tolist()
    return float(value), best, False


def row_total_sum(a):
    """sum_n |sum_k a_nk|, with correctly rounded sums."""
    return math.fsum(abs(math.fsum(row)) for row in np.asarray(a, dtype=float))


def enumerate_sup(b, expo):
    """Brute-force sup over every row subset, in plain Python (test oracle)."""
    b = np.asarray(b, dtype=float)
    n, m = b.shape
    best = 0.0
    for size in range(1, n + 1):
        for rows in itertools.combinations(range(n), size):
            total = 0.0
            for k in range(m):
                total += _pow(abs(math.fsum(b[i, k] for i in rows)), expo[k])
            best = max(best, total)
    return best


# --------------------------------------------------------------------------
# the evaluator


@dataclass
class _Level:
    a: np.ndarray
    p: np.ndarray
    conj: np.ndarray
    q: np.ndarray
    fixed_cols: int

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def tail_start(self):
        return self.rows - self.rows // 4


def _levels(src, p, q, bounds):
    avail_r = src.max_rows if src.max_rows is not None else math.inf
    avail_c = src.max_cols if src.max_cols is not None else math.inf
    avail_c = min(avail_c, p.N)
    if q is not None:
        avail_r = min(avail_r, q.size)
    base_r = min(bounds.n_rows, avail_r // 4)
    base_c = min(bounds.n_cols or bounds.n_rows, avail_c // 4)
    if bounds.n_cols is None:
        base_r = base_c = min(base_r, base_c)
    if 4 * base_r < MIN_ROWS or base_c < 1:
        raise InsufficientTruncation(
            f"largest truncation has {int(4 * base_r)} rows and {int(4 * base_c)} columns")
    return [(int(base_r * f), int(base_c * f)) for f in (1, 2, 4)]


def _prepare(src, p, q, bounds):
    dims = _levels(src, p, q, bounds)
    rows, cols = dims[-1]
    full = src.block(rows, cols)
    qfull = np.ones(rows) if q is None else q[:rows]
    fixed = dims[0][0] - dims[0][0] // 4
    return [_Level(full[:r, :c], p.p[:c], p.conj[:c], qfull[:r], min(fixed, c)) for r, c in dims]


def _col_mask(spec, lv, width=None):
    width = lv.a.shape[1] if width is None else width
    mask = np.ones(width, dtype=bool)
    if spec.cols == "K1":
        mask &= lv.p[:width] <= 1
    elif spec.cols == "K2":
        mask &= lv.p[:width] > 1
    return mask


def _alpha_cols(lv, ncols):
    tail = lv.a[lv.tail_start:, :ncols]
    return tail.mean(axis=0), (lv.tail_start, lv.rows)


def _deviation(spec, lv, width):
    """|a_nk - alpha_k| over the columns the body reads, and the estimate."""
    if spec.alpha == "column":
        alpha, rows = _alpha_cols(lv, width)
        est = LimitEstimate(tuple(float(x) for x in alpha), rows, width)
        return np.abs(lv.a[:, :width] - alpha[None, :]), est
    return np.abs(lv.a[:, :width]), None


def _body(spec, lv, L, N, f_max):
    """Value of the condition body at one truncation level.

    Returns (value, zero_scale, witness, estimate).
    """
    shape = spec.shape
    a = lv.a
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if shape == "sup-F-cols":
            mask = _col_mask(spec, lv)
            if not mask.any():
                return 0.0, 0.0, {}, None
            vals = sign_split_sup(a[:, mask], lv.p[mask])
            j = int(np.argmax(vals))
            col = int(np.flatnonzero(mask)[j])
            colv = a[:, col]
            rows = np.flatnonzero(colv > 0) if colv[colv > 0].sum() >= -colv[colv < 0].sum() \
                else np.flatnonzero(colv < 0)
            return float(vals[j]), 0.0, {"col": col, "F": rows.tolist(), "exact": True}, None

        if shape == "sum-F-rows":
            mask = _col_mask(spec, lv)
            if not mask.any():
                return 0.0, 0.0, {}, None
            b = a[:, mask] * float(L) ** spec.l_expo
            value, rows, exact = subset_sup(b, lv.conj[mask], f_max)
            upper = float(np.sum(sign_split_sup(b, lv.conj[mask])))
            return value, 0.0, {"F": rows, "exact": exact, "upper_bound": _num(upper)}, None

        if shape == "sum-F-cols":
            b = a * float(N) ** (spec.n_expo / lv.p)[None, :]
            value, cols, exact = subset_sup(b.T, np.ones(a.shape[0]), f_max)
            upper = float(np.sum(sign_split_sup(b.T, np.ones(a.shape[0]))))
            return value, 0.0, {"F": cols, "exact": exact, "upper_bound": _num(upper)}, None

        if shape == "lim-entry":
            width = lv.fixed_cols
            dev, est = _deviation(spec, lv, width)
            vals = np.max(dev ** lv.q[:, None], axis=1) if width else np.zeros(lv.rows)
            return _tail(vals, lv), float(np.max(vals, initial=0.0)), {}, est

        if shape in ("sup-entry", "sup-rowsum-conj"):
            width = lv.tail_start if spec.alpha else a.shape[1]
            width = min(width, a.shape[1])
            dev, est = _deviation(spec, lv, width)
            mask = _col_mask(spec, lv, width)
            if not mask.any():
                return 0.0, 0.0, {}, est
            lfac = float(L) ** (spec.l_expo / lv.q) if spec.L else np.ones(lv.rows)
            scaled = dev[:, mask] * lfac[:, None]
            if shape == "sup-entry":
                terms = scaled ** lv.p[:width][mask][None, :]
                per_row = np.max(terms, axis=1)
            else:
                if spec.N:
                    scaled = scaled * float(N) ** spec.n_expo
                terms = scaled ** lv.conj[:width][mask][None, :]
                per_row = np.sum(terms, axis=1)
            return _sup(per_row, est)

        if shape in ("sup-rowsum", "lim-rowsum"):
            width = min(lv.tail_start, a.shape[1]) if spec.alpha else a.shape[1]
            dev, est = _deviation(spec, lv, width)
            w = float(N) ** (spec.n_expo / lv.p[:width]) if spec.N else np.ones(width)
            rs = dev @ w
            per_row = rs ** lv.q if spec.outer_q else rs
            if spec.L:
                per_row = per_row * float(L) ** (spec.l_expo / lv.q)
            if shape == "lim-rowsum":
                return _tail(per_row, lv), float(np.max(per_row)), {}, est
            return _sup(per_row, est)

        if shape == "sum-rows":
            return row_total_sum(a), 0.0, {}, None
        totals = a.sum(axis=1)
        if shape == "sup-rowtotal":
            return _sup(np.abs(totals) ** lv.q, None)
        if shape == "lim-rowtotal":
            est = None
            if spec.alpha == "scalar":
                alpha = float(totals[lv.tail_start:].mean())
                est = LimitEstimate((alpha,), (lv.tail_start, lv.rows), 1)
                totals = totals - alpha
            vals = np.abs(totals) ** lv.q
            return _tail(vals, lv), float(np.max(vals)), {}, est
    raise AssertionError(shape)


def _sup(per_row, est):
    if per_row.size == 0:
        return 0.0, 0.0, {}, est
    if np.any(np.isnan(per_row)):
        return math.nan, 0.0, {}, est
    i = int(np.argmax(per_row))
    return float(per_row[i]), 0.0, {"row": i}, est


def _tail(vals, lv):
    return float(np.max(vals[lv.tail_start:], initial=0.0))


def _trace(spec, levels, L, N, bounds):
    """Evaluate the body at every level for fixed L and N."""
    values, scale, witness, est = [], 0.0, {}, None
    running = 0.0
    notes = []
    for lv in levels:
        v, sc, w, e = _body(spec, lv, L, N, bounds.f_max)
        if spec.shape.startswith("sum-F") and w and not w.get("exact", True):
            # heuristic lower bounds: keep the best seen so far so the trace is monotone
            if v < running:
                v = running
            else:
                witness = w
            running = v
        else:
            witness = w
        values.append(v)
        scale, est = sc, e
    if spec.shape.startswith("sum-F") and witness and not witness.get("exact", True):
        notes.append(f"F restricted: exhaustive over the first {bounds.f_max + 1} indices "
                     "plus sign-pattern candidates; bound_value is a lower bound and "
                     "witness.upper_bound the sign-split upper bound")
    status, why = classify(values, spec.kind, scale)
    return Verdict(status, values[-1], witness=witness, diagnostic=tuple(values),
                   levels=tuple((lv.rows, lv.a.shape[1]) for lv in levels), label=spec.id,
                   limit_estimate=est, notes=tuple(notes) + (why,))


def _exists(make, grid, name):
    """First grid value whose trace holds; otherwise the most informative failure."""
    first_inconclusive = None
    last = None
    for v in grid:
        verdict = make(v)
        if verdict.status is Status.HOLDS:
            return verdict, v
        if verdict.status is Status.INCONCLUSIVE and first_inconclusive is None:
            first_inconclusive = (verdict, v)
        last = (verdict, v)
    out = first_inconclusive or last
    return replace(out[0], notes=out[0].notes + (f"no {name} in 1..{grid[-1]} gives a stable value",)), out[1]


def _forall(make, samples, name):
    verdicts = [make(v) for v in samples]
    status = worst(v.status for v in verdicts)
    pick = max((v for v in verdicts if v.status is status), key=lambda v: _key(v.bound_value))
    return replace(pick, status=status, bound_value=max(_key(v.bound_value) for v in verdicts)), verdicts


def _key(x):
    return math.inf if math.isnan(x) else x


def evaluate_condition(spec, A, p, q=None, bounds=None):
    """Evaluate condition ``spec`` (an id such as "4.20") on matrix source A.

    ``p`` indexes columns and ``q`` rows; q defaults to q_n = 1. Existential L
    or N is searched over 1, 2, 4, ..., bounds.l_max and the smallest
    successful value is the witness; universal L or N is sampled at
    1, 2 and l_max and the worst outcome is reported.
    """
    spec = get_condition(spec)
    bounds = bounds or Bounds()
    src = as_source(A)
    p = exponent_stats(p)
    q = None if q is None else exponent_stats(q).p
    levels = _prepare(src, p, q, bounds)

    def at(L=1, N=1):
        return _trace(spec, levels, L, N, bounds)

    grid, samples = bounds.search_grid, bounds.samples
    if spec.L == "forall" and spec.N == "exists":
        found = []

        def with_L(L):
            v, n = _exists(lambda N: at(L, N), grid, "N")
            found.append((L, n, v.bound_value))
            return v

        out, _ = _forall(with_L, samples, "L")
        ln = {"L": [f[0] for f in found], "N": [f[1] for f in found]}
        out = replace(out, L_or_N=ln, witness=dict(out.witness, samples=[
            {"L": L, "N": n, "bound": _num(b)} for L, n, b in found]))
    elif spec.L == "exists" or spec.N == "exists":
        name = "L" if spec.L else "N"
        out, v = _exists(lambda x: at(**{name: x}), grid, name)
        out = replace(out, L_or_N={name: v})
    elif spec.L == "forall" or spec.N == "forall":
        name = "L" if spec.L else "N"
        out, verdicts = _forall(lambda x: at(**{name: x}), samples, name)
        out = replace(out, L_or_N={name: samples}, witness=dict(out.witness, samples=[
            {name: x, "bound": _num(v.bound_value), "status": v.status.value}
            for x, v in zip(samples, verdicts)]))
    else:
        out = at()
    return replace(out, label=spec.id)
