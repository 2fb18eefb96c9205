"""The generalized means operator combined with the difference operator.

The composed triangle maps a sequence x to

    y_n = (1/r_n) * sum_{k<=n} s_{n-k} t_k (x_k - x_{k-1}),   x_{-1} = 0,

and its inverse is written with the coefficients D_n of the reciprocal power
series of s (see :func:`inverse_coeffs`).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import (
    FiniteSequence,
    IndexOutOfRange,
    LengthMismatch,
    SeqSpaceError,
    TriangleMatrix,
    ZeroLeading,
    ZERO_GUARD,
    as_array,
    as_sequence,
)

log = logging.getLogger(__name__)

#: Largest n for which the determinant oracle is evaluated.
ORACLE_MAX_N = 12


class OracleSizeExceeded(SeqSpaceError):
    def __init__(self, n):
        self.n = n
        super().__init__(n, f"> {ORACLE_MAX_N}")


@dataclass(frozen=True)
class InverseCoeffs:
    D: np.ndarray
    source: str

    @property
    def alternating(self):
        """(-1)**j * D_j, the form every kernel consumes."""
        signs = np.where(np.arange(self.D.size) % 2 == 0, 1.0, -1.0)
        return signs * self.D

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.D)))

    def convolution_residual(self, s):
        """Scaled residuals of sum_{j<=m} (-1)^j D_j s_{m-j} - [m == 0].

        Each residual is divided by sum_j |D_j s_{m-j}|, the magnitude of the
        terms being cancelled, so the figure is a backward error that stays
        meaningful when D grows geometrically.
        """
        s = np.asarray(s, dtype=float)
        n = min(self.D.size, s.size)
        alt = self.alternating[:n]
        out = np.empty(n)
        for m in range(n):
            terms = alt[: m + 1] * s[m::-1][: m + 1]
            target = 1.0 if m == 0 else 0.0
            scale = max(np.sum(np.abs(terms)), 1.0 if m == 0 else 0.0)
            out[m] = abs(np.sum(terms) - target) / scale if scale else 0.0
        return out


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        raise LengthMismatch("s is empty")
    if abs(s[0]) <= ZERO_GUARD:
        raise ZeroLeading("s")
    return s


def _params_s(params_or_s):
    return params_or_s.s if hasattr(params_or_s, "s") else params_or_s


def means_matrix_entry(params, n, k):
    """Entry (n, k) of A(r, s, t): s_{n-k} t_k / r_n below the diagonal."""
    if n < 0 or k < 0 or n >= params.length or k >= params.length:
        raise IndexOutOfRange(n, k)
    if k > n:
        return 0.0
    return params.s[n - k] * params.t[k] * params.r_inv[n]


def difference_apply(x):
    x = as_array(x)
    return FiniteSequence(np.diff(x, prepend=0.0))


def forward_transform(params, x):
    """y = A(r, s, t) (Delta x) on the stored prefix of x."""
    x = as_sequence(x)
    params.require(x.N)
    y = _kernels.forward(params.s, params.t, params.r_inv, x.values)
    return FiniteSequence(y)


def inverse_coeffs_det(s, n):
    """D_n by the Hessenberg determinant, evaluated exactly in rationals.

    Intended as an independent check on :func:`inverse_coeffs`; limited to
    n <= 12.
    """
    s = _check_s(_params_s(s))
    if n < 0:
        raise IndexOutOfRange(n)
    if n > ORACLE_MAX_N:
        raise OracleSizeExceeded(n)
    if n >= s.size:
        raise LengthMismatch(f"s has {s.size} terms, D_{n} needs {n + 1}")
    exact = [Fraction(float(v)) for v in s[: n + 1]]
    s0 = exact[0]
    if n == 0:
        return float(1 / s0)
    # row i (1-based) holds s_i, s_{i-1}, ..., s_0, 0, ...
    mat = [[exact[i - j + 1] if i - j + 1 >= 0 else Fraction(0) for j in range(1, n + 1)]
           for i in range(1, n + 1)]
    return float(_det(mat) / s0 ** (n + 1))


def _det(mat):
    # fraction-exact Gaussian elimination
    mat = [row[:] for row in mat]
    size = len(mat)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, size):
            f = mat[r][col] / mat[col][col]
            if f:
                for c in range(col, size):
                    mat[r][c] -= f * mat[col][c]
    return det


def inverse_coeffs(s, N, source="recursion"):
    """D_0 .. D_{N-1} with D_0 = 1/s_0.

    The production path is the recursion forced by sum_j (-1)^j D_j s_{m-j} = 0
    for m >= 1; ``source="determinant"`` evaluates each D_n with the exact
    determinant instead (N <= 13).
    """
    s = _check_s(_params_s(s))
    if N > s.size:
        raise LengthMismatch(f"s has {s.size} terms, {N} coefficients requested")
    if source == "recursion":
        alt = _kernels.alt_dcoeffs(s, N)
        d = alt * np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    elif source == "determinant":
        d = np.array([inverse_coeffs_det(s, n) for n in range(N)])
    else:
        raise ValueError(f"unknown source {source!r}")
    d.flags.writeable = False
    coeffs = InverseCoeffs(d, source)
    if s.size > 1 and abs(s[1]) > abs(s[0]):
        log.info("inverse coefficients may grow geometrically: |s1/s0| = %.3g, max|D| = %.3g",
                 abs(s[1] / s[0]), coeffs.max_abs)
    return coeffs


def inverse_transform(params, y, coeffs=None):
    """Recover x from y = A(r, s, t; Delta) x.

    x_n = sum_{j<=n} sum_{k<=n-j} (-1)^k D_k / t_{k+j} * r_j y_j
    """
    y = as_sequence(y)
    n = y.N
    params.require(n)
    if coeffs is None:
        coeffs = inverse_coeffs(params.s, n)
    elif coeffs.D.size < n:
        raise LengthMismatch("not enough inverse coefficients")
    x = _kernels.inverse(coeffs.alternating[:n], params.r, params.t, y.values)
    return FiniteSequence(x)


def materialize_operator(params, N, which):
    """N x N block of one of the triangles "A", "Delta", "ADelta" or "B".

    B is the inverse of A(r, s, t) with b_nk = (-1)^{n-k} D_{n-k} r_k / t_n.
    """
    key = which.replace("Δ", "Delta").upper()
    if N < 1:
        raise IndexOutOfRange(N)
    if key == "DELTA":
        return TriangleMatrix(np.eye(N) - np.eye(N, k=-1), operator=True)
    params.require(N)
    if key not in ("A", "ADELTA", "B"):
        raise ValueError(f"unknown operator {which!r}")
    idx = np.arange(N)
    diff = idx[:, None] - idx[None, :]
    lower = diff >= 0
    s = params.s[:N]
    if key == "A":
        a = np.where(lower, s[np.clip(diff, 0, None)], 0.0)
        return TriangleMatrix(a * params.t[None, :N] * params.r_inv[:N, None], operator=True)
    if key == "ADELTA":
        # (A Delta)_nk = (s_{n-k} t_k - s_{n-k-1} t_{k+1}) / r_n, last term absent on the diagonal
        head = np.where(lower, s[np.clip(diff, 0, None)], 0.0) * params.t[None, :N]
        t_next = np.append(params.t[1:N], 0.0)
        tail = np.where(diff >= 1, s[np.clip(diff - 1, 0, None)], 0.0) * t_next[None, :]
        return TriangleMatrix((head - tail) * params.r_inv[:N, None], operator=True)
    if key == "B":
        alt = inverse_coeffs(params.s, N).alternating
        b = np.where(lower, alt[np.clip(diff, 0, None)], 0.0)
        b = b / params.t[:N, None] * params.r[None, :N]
        return TriangleMatrix(b, operator=True)
    raise ValueError(f"unknown operator {which!r}")


def inverse_matrix(params, N, coeffs=None):
    """Dense block of (A(r, s, t) Delta)^{-1}: entry (n, k) multiplies y_k in x_n."""
    params.require(N)
    if coeffs is None:
        coeffs = inverse_coeffs(params.s, N)
    return _kernels.inverse_matrix(coeffs.alternating[:N], params.r, params.t, N)
