"""Dual spaces and matrix maps of the difference spaces, tested through conditions.

Three auxiliary matrices carry the characterizations:

* C, with c_nk = a_n * (entry (n, k) of the inverse triangle), for alpha-duals;
* E, built from suffix sums of a and the inverse coefficients D, for beta-
  and gamma-duals. It satisfies sum_{k<=n} a_k x_k = sum_{k<=n} e_nk y_k;
* E-tilde, the same construction applied to each row of a matrix A.

Each dual or mapping class is a list of conditions on one of these matrices;
:func:`dual_membership` and :func:`matrix_map_check` evaluate the list and
return the conjunction.
"""

import math

import numpy as np

from . import _kernels
from .conditions import (
    Bounds,
    InsufficientTruncation,
    Status,
    Verdict,
    classify,
    conjunction,
    evaluate_condition,
)
from .core import (
    IndexOutOfRange,
    LengthMismatch,
    SeqSpaceError,
    as_array,
    as_sequence,
    exponent_stats,
)
from .sources import FunctionSource, as_source
from .triangle import forward_transform, inverse_coeffs, inverse_matrix

DUAL_KINDS = ("alpha", "beta", "gamma")
SPACES = ("l", "c0", "c", "linf")
TARGETS = ("linf", "l1", "c0q", "cq", "linfq")


class MixedExponentBranch(SeqSpaceError):
    """p has terms on both sides of 1 where a uniform branch is required.

    ``branches`` maps "p<=1" and "p>1" to the verdicts of each branch's
    condition list, so the caller can still see both outcomes.
    """

    def __init__(self, k1, k2, branches=None):
        self.branches = branches or {}
        super().__init__(f"{k1} exponents <= 1 and {k2} exponents > 1")


class UnsupportedMapping(SeqSpaceError):
    pass


def _check_entry(n, k, size):
    if not (0 <= k <= n < size):
        raise IndexOutOfRange(n, k)


# --------------------------------------------------------------------------
# entries and blocks


def alpha_dual_matrix_entry(params, a, n, k):
    """c_nk = sum_{j<=n-k} (-1)^j D_j / t_{j+k} * r_k * a_n."""
    a = as_array(a)
    _check_entry(n, k, min(a.size, params.length))
    d = inverse_coeffs(params.s, n - k + 1).alternating
    return math.fsum(d[j] / params.t[j + k] for j in range(n - k + 1)) * params.r[k] * a[n]


def alpha_dual_matrix(params, a, m):
    a = as_array(a)
    if m > a.size:
        raise LengthMismatch(f"a has {a.size} terms, {m} requested")
    return a[:m, None] * inverse_matrix(params, m)


def _e_entry(params, a, d, n, k):
    # d holds D_0..D_n (not alternated)
    r, t, s0 = params.r, params.t, params.s[0]
    val = a[k] / (s0 * t[k])
    if n > k:
        val += (d[0] / t[k] - d[1] / t[k + 1]) * math.fsum(a[k + 1 : n + 1])
    for l in range(k + 2, n + 1):
        val += (-1) ** (l - k) * d[l - k] / t[l] * math.fsum(a[l : n + 1])
    return r[k] * val


def beta_gamma_matrix_entry(params, a, n, k):
    """Entry e_nk, evaluated term by term.

    e_nk = r_k [ a_k / (s_0 t_k)
                 + (D_0/t_k - D_1/t_{k+1}) sum_{j=k+1}^n a_j
                 + sum_{l=k+2}^n (-1)^{l-k} D_{l-k}/t_l sum_{j=l}^n a_j ]

    Empty sums are zero, so e_nn = r_n a_n / (s_0 t_n).
    """
    a = as_array(a)
    _check_entry(n, k, min(a.size, params.length))
    d = inverse_coeffs(params.s, n + 1).D
    return _e_entry(params, a, d, n, k)


def _e_block(params, amat):
    m = amat.shape[0]
    params.require(m)
    alt = inverse_coeffs(params.s, m).alternating
    if m == 1:
        alt = np.append(alt, 0.0)
    return _kernels.e_rows(np.ascontiguousarray(amat, dtype=float), alt, float(params.s[0]),
                           params.r, params.t)


def beta_gamma_matrix(params, a, m):
    """Leading m x m block of E, every row built from the same a."""
    a = as_array(a)
    if m > a.size:
        raise LengthMismatch(f"a has {a.size} terms, {m} requested")
    return _e_block(params, np.tile(a[:m], (m, 1)))


def e_tilde_entry(params, A, n, k):
    """E-tilde entry: the E construction with a_j replaced by a_nj (row n of A)."""
    src = as_source(A)
    size = params.length
    for lim in (src.max_rows, src.max_cols):
        if lim is not None:
            size = min(size, lim)
    _check_entry(n, k, size)
    row = src.block(n + 1, n + 1)[n]
    d = inverse_coeffs(params.s, n + 1).D
    return _e_entry(params, row, d, n, k)


def e_tilde_matrix(params, A, m):
    src = as_source(A)
    return _e_block(params, src.block(m, m))


def abel_identity_check(params, a, x, n):
    """Both sides of sum_{k<=n} a_k x_k = sum_{k<=n} e_nk y_k, y the transform of x."""
    a, x = as_array(a), as_sequence(x)
    if n < 0 or n >= min(a.size, x.N, params.length):
        raise LengthMismatch(f"n={n} outside the common length of a, x and params")
    lhs = math.fsum(a[: n + 1] * x.values[: n + 1])
    y = forward_transform(params, x.values[: n + 1]).values
    e = beta_gamma_matrix(params, a, n + 1)[n]
    return lhs, math.fsum(e * y)


# --------------------------------------------------------------------------
# condition lists

# (set name, condition id); "B1".."B3" are conditions on the sequence itself
_ALPHA = {
    ("l", ">1"): [("H5", "4.5")],
    ("l", "<=1"): [("H4", "4.4")],
    "c0": [("H1", "4.16")],
    "c": [("H1", "4.16"), ("H2", "4.21")],
    "linf": [("H3", "4.25")],
}
_GAMMA = {
    ("l", ">1"): [("Gamma5", "4.15")],
    ("l", "<=1"): [("Gamma4", "4.14")],
    "c0": [("Gamma1", "4.20")],
    "c": [("Gamma1", "4.20"), ("Gamma2", "4.24")],
    "linf": [("Gamma3", "4.29")],
}
_SEQ = [("B1", None), ("B2", None), ("B3", None)]
_BETA = {
    ("l", ">1"): _SEQ + [("B4", "4.10"), ("B6", "4.11"), ("B8", "4.13")],
    ("l", "<=1"): _SEQ + [("B5", "4.9"), ("B6", "4.11"), ("B7", "4.12")],
    "c0": _SEQ + [("B6", "4.11"), ("B9", "4.19"), ("B10", "4.18")],
    "c": _SEQ + [("B6", "4.11"), ("B9", "4.19"), ("B10", "4.18"), ("B11", "4.23")],
    "linf": _SEQ + [("B12", "4.27"), ("B13", "4.28")],
}
_BUNDLES = {"alpha": _ALPHA, "beta": _BETA, "gamma": _GAMMA}

# mappings from (domain, target) to conditions on E-tilde
_MAPS = {
    ("l", "linf", ">1"): ["4.15"],
    ("l", "linf", "<=1"): ["4.9"],
    ("l", "l1", ">1"): ["4.5"],
    ("l", "l1", "<=1"): ["4.4"],
    ("c0", "c0q"): ["4.6", "4.17"],
    ("c0", "cq"): ["4.11", "4.18", "4.19"],
    ("c0", "linfq"): ["4.20"],
    ("c", "c0q"): ["4.6", "4.17", "4.22"],
    ("c", "cq"): ["4.11", "4.18", "4.19", "4.23"],
    ("c", "linfq"): ["4.20", "4.24"],
    ("linf", "c0q"): ["4.26"],
    ("linf", "cq"): ["4.27", "4.28"],
    ("linf", "linfq"): ["4.29"],
}


def _choice(value, options, what):
    if value not in options:
        raise ValueError(f"{what} must be one of {', '.join(options)}, not {value!r}")
    return value


def _branch(p):
    if p.all_above_one:
        return ">1"
    if p.all_at_most_one:
        return "<=1"
    return None


def _seq_levels(n, bounds):
    base = min(bounds.n_rows, n // 4)
    if 4 * base < 8:
        raise InsufficientTruncation(f"sequence has {n} usable terms")
    return [base, 2 * base, 4 * base]


def _seq_verdict(label, values, kind, scale=0.0, witness=None, levels=()):
    status, why = classify(values, kind, scale)
    return Verdict(status, float(values[-1]), witness=witness or {}, diagnostic=tuple(values),
                   levels=tuple((m, m) for m in levels), label=label, notes=(why,))


def _series_tail(partial, m):
    # oscillation of partial sums over the last quarter of the first m terms
    ts = m - m // 4
    return float(np.max(np.abs(partial[ts:m] - partial[m - 1])))


def _b1(a, levels):
    partial = np.cumsum(a)
    vals = [_series_tail(partial, m) for m in levels]
    return _seq_verdict("B1", vals, "limit", float(np.max(np.abs(partial))), levels=levels)


def _b2(params, a, levels):
    top = levels[-1]
    alt = inverse_coeffs(params.s, top).alternating
    kfix = levels[0] - levels[0] // 4
    vals, scale = [], 0.0
    for m in levels:
        suffix = np.cumsum(a[:m][::-1])[::-1]
        worst_tail = 0.0
        for k in range(kfix):
            j = np.arange(k + 2, m)
            if j.size == 0:
                continue
            partial = np.cumsum(alt[j - k] / params.t[j] * suffix[j])
            scale = max(scale, float(np.max(np.abs(partial))))
            ts = m - m // 4 - (k + 2)
            if ts < partial.size:
                worst_tail = max(worst_tail, float(np.max(np.abs(partial[max(ts, 0):] - partial[-1]))))
        vals.append(worst_tail)
    return _seq_verdict("B2", vals, "limit", scale, levels=levels)


def _b3(params, a, p, levels):
    w = np.abs(params.r[: levels[-1]] * a[: levels[-1]] / params.t[: levels[-1]]) ** p.p[: levels[-1]]
    vals = [float(np.max(w[:m])) for m in levels]
    return _seq_verdict("B3", vals, "bound", witness={"index": int(np.argmax(w))}, levels=levels)


def _matrix_source(build, size):
    def fn(rows, cols):
        m = max(rows, cols)
        return build(m)[:rows, :cols]

    return FunctionSource(fn, max_rows=size, max_cols=size)


def _run_list(items, a, params, p, src, bounds, q=None):
    out = []
    levels = None
    for name, cid in items:
        if cid is None:
            if levels is None:
                levels = _seq_levels(min(a.size, params.length, p.N), bounds)
            if name == "B1":
                v = _b1(a, levels)
            elif name == "B2":
                v = _b2(params, a, levels)
            else:
                v = _b3(params, a, p, levels)
        else:
            v = evaluate_condition(cid, src, p, q, bounds)
            v = Verdict(**{**v.__dict__, "label": f"{name}[{cid}]"})
        out.append(v)
    return out


def dual_membership(a, params, p, dual_kind, space, bounds=None):
    """Is a in the alpha-, beta- or gamma-dual of the difference space over ``space``?

    The alpha-dual is read off the matrix C and the target l_1; the beta- and
    gamma-duals off E with targets c and bounded series. For ``space="l"`` the
    condition list depends on whether every p_k exceeds 1 or none does; mixed
    exponents raise :class:`MixedExponentBranch` with both lists evaluated.
    """
    _choice(dual_kind, DUAL_KINDS, "dual_kind")
    _choice(space, SPACES, "space")
    bounds = bounds or Bounds()
    a = as_array(a).astype(float)
    p = exponent_stats(p)
    size = min(a.size, params.length, p.N)
    if dual_kind == "alpha":
        src = _matrix_source(lambda m: alpha_dual_matrix(params, a, m), size)
    else:
        src = _matrix_source(lambda m: beta_gamma_matrix(params, a, m), size)
    table = _BUNDLES[dual_kind]
    label = f"{dual_kind}-dual/{space}"
    if space == "l":
        branch = _branch(p)
        if branch is None:
            branches = {b: conjunction(f"{label} (p{b} part)", _run_list(table[("l", b)], a, params, p, src, bounds))
                        for b in ("<=1", ">1")}
            raise MixedExponentBranch(p.K1.size, p.K2.size, branches)
        items = table[("l", branch)]
        label += f" (p{branch})"
    else:
        items = table[space]
    return conjunction(label, _run_list(items, a, params, p, src, bounds))


def matrix_map_check(A, params, p, target, q=None, domain=None, bounds=None):
    """Does A map the difference space over ``domain`` into ``target``?

    ``target`` is linf or l1 (from the space over l(p)), or c0q, cq, linfq
    (the q-spaces, from c0, c or linf; ``domain`` is required then). The
    conditions are evaluated on E-tilde, and each of the first
    ``bounds.n_rows`` rows of A must lie in the beta-dual of the domain.
    """
    _choice(target, TARGETS, "target")
    bounds = bounds or Bounds()
    p = exponent_stats(p)
    if target in ("linf", "l1"):
        domain = domain or "l"
        if domain != "l":
            raise UnsupportedMapping(f"target {target} is characterized only from l")
    else:
        if domain not in ("c0", "c", "linf"):
            raise UnsupportedMapping(f"target {target} needs domain c0, c or linf")
    src = as_source(A)
    size = params.length
    for lim in (src.max_rows, src.max_cols):
        if lim is not None:
            size = min(size, lim)
    etilde = _matrix_source(lambda m: _e_block(params, src.block(m, m)), size)

    if domain == "l":
        branch = _branch(p)
        if branch is None:
            raise MixedExponentBranch(p.K1.size, p.K2.size)
        ids = _MAPS[("l", target, branch)]
    else:
        ids = _MAPS[(domain, target)]
    parts = []
    for cid in ids:
        v = evaluate_condition(cid, etilde, p, q, bounds)
        parts.append(Verdict(**{**v.__dict__, "label": f"E~[{cid}]"}))

    width = min(size, p.N, 4 * bounds.n_rows)
    n_check = min(bounds.n_rows, width)
    block = src.block(n_check, width)
    rows = []
    for n in range(n_check):
        v = dual_membership(block[n], params, p, "beta", domain, bounds)
        rows.append(Verdict(**{**v.__dict__, "label": f"row {n}"}))
    parts.append(conjunction(f"rows in beta-dual/{domain}", rows))
    return conjunction(f"map {domain}->{target}", parts)


__all__ = [
    "DUAL_KINDS", "SPACES", "TARGETS", "MixedExponentBranch", "UnsupportedMapping",
    "alpha_dual_matrix_entry", "alpha_dual_matrix", "beta_gamma_matrix_entry",
    "beta_gamma_matrix", "e_tilde_entry", "e_tilde_matrix", "abel_identity_check",
    "dual_membership", "matrix_map_check", "Status",
]
