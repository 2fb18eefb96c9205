"""Parameter triples for the classical special cases.

weighted means  r = 1/u, t = v, s = 1         entries u_n v_k
Cesaro          r = n + 1, s = t = 1          entries 1/(n+1)
Euler           r = 1/n!, t = a^n/n!, s = (1-a)^n/n!
                                              entries C(n,k) a^k (1-a)^(n-k)
a^alpha         r = n + 1, t = 1 + a^n, s = 1 entries (1 + a^k)/(n+1)
"""

import numpy as np

from .core import GeneralizedMeansParams, SeqSpaceError, ZeroEntry, ZERO_GUARD, as_array

#: Largest Euler truncation; 1/n! stays well inside double range up to here.
EULER_MAX_N = 20


class AlphaOutOfRange(SeqSpaceError):
    pass


class TruncationTooLarge(SeqSpaceError):
    pass


def _check_n(N):
    if N < 1:
        raise ValueError("N must be at least 1")


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(alpha)


def weighted_mean_params(u, v):
    """Weighted mean matrix with entries u_n v_k for k <= n.

    1/r_n is stored as u_n itself, so the entries come out exact.
    """
    u, v = as_array(u).astype(float), as_array(v).astype(float)
    for name, arr in (("u", u), ("v", v)):
        small = np.flatnonzero(np.abs(arr) <= ZERO_GUARD)
        if small.size:
            raise ZeroEntry(name, int(small[0]))
    n = min(u.size, v.size)
    return GeneralizedMeansParams(1.0 / u, np.ones(n), v, r_inv=u)


def cesaro_params(N):
    _check_n(N)
    return GeneralizedMeansParams(np.arange(1.0, N + 1), np.ones(N), np.ones(N))


def _factorial_scaled(base, N):
    # base^n / n! by the recurrence x_n = x_{n-1} * base / n
    out = np.empty(N)
    out[0] = 1.0
    for n in range(1, N):
        out[n] = out[n - 1] * base / n
    return out


def euler_params(alpha, N):
    """Euler means of order alpha, 0 < alpha < 1, truncated to N <= 20 terms."""
    _check_alpha(alpha)
    _check_n(N)
    if N > EULER_MAX_N:
        raise TruncationTooLarge(N, f"> {EULER_MAX_N}")
    r = _factorial_scaled(1.0, N)
    return GeneralizedMeansParams(r, _factorial_scaled(1.0 - alpha, N), _factorial_scaled(alpha, N),
                                  r_inv=_factorials(N))


def _factorials(N):
    out = np.empty(N)
    out[0] = 1.0
    for n in range(1, N):
        out[n] = out[n - 1] * n
    return out


def a_alpha_params(alpha, N):
    _check_alpha(alpha)
    _check_n(N)
    return GeneralizedMeansParams(np.arange(1.0, N + 1), np.ones(N), 1.0 + alpha ** np.arange(N))


FACTORIES = {
    "weighted": weighted_mean_params,
    "cesaro": cesaro_params,
    "euler": euler_params,
    "aalpha": a_alpha_params,
}
