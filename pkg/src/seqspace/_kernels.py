"""Inner loops.

Every kernel exists twice: a loop version compiled by numba (``*_loops``) and
a vectorised numpy version (``*_np``). The public name binds to one of them
according to :mod:`seqspace._accel`. Both versions are importable so the
test-suite and the benchmark can compare them directly.

Conventions shared by all kernels: ``alt_d[j] = (-1)**j * D_j`` (the inverse
coefficients with their alternating sign folded in), ``r_inv = 1 / r``.
"""

import numpy as np

from ._accel import njit, pick


# --------------------------------------------------------------------------
# inverse coefficients


@njit
def alt_dcoeffs_loops(s, n):
    out = np.zeros(n)
    s0 = s[0]
    out[0] = 1.0 / s0
    for m in range(1, n):
        acc = 0.0
        for j in range(m):
            acc += out[j] * s[m - j]
        out[m] = -acc / s0
    return out


def alt_dcoeffs_np(s, n):
    out = np.zeros(n)
    s0 = s[0]
    out[0] = 1.0 / s0
    for m in range(1, n):
        out[m] = -np.dot(out[:m], s[m:0:-1]) / s0
    return out


# --------------------------------------------------------------------------
# forward / inverse transforms


@njit
def forward_loops(s, t, r_inv, x):
    n = x.shape[0]
    u = np.empty(n)
    prev = 0.0
    for k in range(n):
        u[k] = t[k] * (x[k] - prev)
        prev = x[k]
    y = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k in range(i + 1):
            acc += s[i - k] * u[k]
        y[i] = r_inv[i] * acc
    return y


def forward_np(s, t, r_inv, x):
    n = x.shape[0]
    u = t[:n] * np.diff(x, prepend=0.0)
    return r_inv[:n] * np.convolve(s[:n], u)[:n]


@njit
def inverse_loops(alt_d, r, t, y):
    # inner[j] caches sum_{k=0}^{i-j} alt_d[k] / t[k+j] as i advances
    n = y.shape[0]
    inner = np.zeros(n)
    ry = np.empty(n)
    for j in range(n):
        ry[j] = r[j] * y[j]
    x = np.empty(n)
    for i in range(n):
        ti = t[i]
        acc = 0.0
        for j in range(i + 1):
            inner[j] += alt_d[i - j] / ti
            acc += inner[j] * ry[j]
        x[i] = acc
    return x


def inverse_np(alt_d, r, t, y):
    n = y.shape[0]
    w = np.convolve(alt_d[:n], r[:n] * y)[:n] / t[:n]
    return np.cumsum(w)


# --------------------------------------------------------------------------
# dense matrices


@njit
def inverse_matrix_loops(alt_d, r, t, n):
    # W[i, k] = r_k * sum_{j=0}^{i-k} alt_d[j] / t[j+k]
    w = np.zeros((n, n))
    for k in range(n):
        acc = 0.0
        for i in range(k, n):
            acc += alt_d[i - k] / t[i]
            w[i, k] = r[k] * acc
    return w


def inverse_matrix_np(alt_d, r, t, n):
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    b = np.where(diff >= 0, alt_d[np.clip(diff, 0, None)], 0.0)
    b = b / t[:n, None] * r[None, :n]
    return np.cumsum(b, axis=0)


@njit
def e_rows_loops(amat, alt_d, s0, r, t):
    """Row ``i`` of the result uses ``amat[i]`` as the multiplier sequence."""
    n = amat.shape[0]
    e = np.zeros((n, n))
    csum = np.zeros(n + 1)
    for i in range(n):
        a = amat[i]
        csum[0] = 0.0
        for j in range(i + 1):
            csum[j + 1] = csum[j] + a[j]
        total = csum[i + 1]
        for k in range(i + 1):
            val = a[k] / (s0 * t[k])
            if k < i:
                val += (alt_d[0] / t[k] + alt_d[1] / t[k + 1]) * (total - csum[k + 1])
            for l in range(k + 2, i + 1):
                val += alt_d[l - k] / t[l] * (total - csum[l])
            e[i, k] = r[k] * val
    return e


def e_rows_np(amat, alt_d, s0, r, t):
    n = amat.shape[0]
    e = np.zeros((n, n))
    idx = np.arange(n)
    diff = idx[None, :] - idx[:, None]
    # upper band l >= k + 2 carries alt_d[l - k]
    band = np.where(diff >= 2, alt_d[np.clip(diff, 0, n - 1)], 0.0)
    tt = t[:n]
    for i in range(n):
        a = amat[i, : i + 1]
        suffix = np.cumsum(a[::-1])[::-1]  # suffix[j] = sum_{j..i} a
        val = a / (s0 * tt[: i + 1])
        if i > 0:
            head = alt_d[0] / tt[:i] + alt_d[1] / t[1 : i + 1]
            val[:i] += head * suffix[1:]
        val += band[: i + 1, : i + 1] @ (suffix / tt[: i + 1])
        e[i, : i + 1] = r[: i + 1] * val
    return e


# --------------------------------------------------------------------------
# subset enumeration: max over F of sum_k |sum_{i in F} b[i, k]|**expo[k]


@njit
def subset_max_loops(b, expo):
    m, c = b.shape
    sums = np.zeros(c)
    best = 0.0
    best_mask = 0
    mask = 0
    for step in range(1, 1 << m):
        # Gray code: flip the lowest set bit position of step
        bit = 0
        while not (step >> bit) & 1:
            bit += 1
        mask ^= 1 << bit
        sign = 1.0 if (mask >> bit) & 1 else -1.0
        for k in range(c):
            sums[k] += sign * b[bit, k]
        val = 0.0
        for k in range(c):
            val += abs(sums[k]) ** expo[k]
        if val > best:
            best = val
            best_mask = mask
    return best, best_mask


def subset_max_np(b, expo):
    m = b.shape[0]
    masks = np.arange(1 << m)
    member = ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)
    vals = (np.abs(member @ b) ** expo[None, :]).sum(axis=1)
    k = int(np.argmax(vals))
    return float(vals[k]), int(masks[k])


# --------------------------------------------------------------------------
# Luxemburg norm bisection on sum_n (absy_n / c) ** p_n


@njit
def scaled_modular_loops(absy, p, c):
    acc = 0.0
    for i in range(absy.shape[0]):
        if absy[i] != 0.0:
            acc += (absy[i] / c) ** p[i]
    return acc


def scaled_modular_np(absy, p, c):
    return float(np.sum((absy / c) ** p))


@njit
def luxemburg_loops(absy, p, tol, max_expand):
    """Return (c, residual, iterations, status); status 1 means no bracket."""
    lo = 1.0
    hi = 1.0
    it = 0
    if scaled_modular_loops(absy, p, 1.0) > 1.0:
        while scaled_modular_loops(absy, p, hi) > 1.0:
            lo = hi
            hi *= 2.0
            it += 1
            if it > max_expand:
                return hi, np.inf, it, 1
    else:
        while scaled_modular_loops(absy, p, lo) <= 1.0:
            hi = lo
            lo *= 0.5
            it += 1
            if it > max_expand:
                return lo, np.inf, it, 1
    # invariant: sigma(lo) > 1 >= sigma(hi)
    best = hi
    best_res = abs(scaled_modular_loops(absy, p, hi) - 1.0)
    while best_res > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = scaled_modular_loops(absy, p, mid)
        it += 1
        res = abs(val - 1.0)
        if res < best_res:
            best = mid
            best_res = res
        if val > 1.0:
            lo = mid
        else:
            hi = mid
    return best, best_res, it, 0


def luxemburg_np(absy, p, tol, max_expand):
    sig = scaled_modular_np
    lo = hi = 1.0
    it = 0
    if sig(absy, p, 1.0) > 1.0:
        while sig(absy, p, hi) > 1.0:
            lo, hi = hi, hi * 2.0
            it += 1
            if it > max_expand:
                return hi, np.inf, it, 1
    else:
        while sig(absy, p, lo) <= 1.0:
            hi, lo = lo, lo * 0.5
            it += 1
            if it > max_expand:
                return lo, np.inf, it, 1
    best, best_res = hi, abs(sig(absy, p, hi) - 1.0)
    while best_res > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = sig(absy, p, mid)
        it += 1
        if abs(val - 1.0) < best_res:
            best, best_res = mid, abs(val - 1.0)
        if val > 1.0:
            lo = mid
        else:
            hi = mid
    return best, best_res, it, 0


alt_dcoeffs = pick(alt_dcoeffs_loops, alt_dcoeffs_np)
forward = pick(forward_loops, forward_np)
inverse = pick(inverse_loops, inverse_np)
inverse_matrix = pick(inverse_matrix_loops, inverse_matrix_np)
e_rows = pick(e_rows_loops, e_rows_np)
subset_max = pick(subset_max_loops, subset_max_np)
scaled_modular = pick(scaled_modular_loops, scaled_modular_np)
luxemburg = pick(luxemburg_loops, luxemburg_np)
