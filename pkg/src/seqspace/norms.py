"""Paranorms, the convex modular and the Luxemburg norm on the transformed sequence.

All functionals act on y = A(r, s, t; Delta) x over the stored prefix; nothing
is extrapolated past the truncation.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    LengthMismatch,
    SeqSpaceError,
    as_array,
    as_sequence,
    exponent_stats,
)
from .triangle import forward_transform

#: Coordinate gap above which two sphere points count as distinct.
STRICTNESS_GAP = 1e-6
#: How far sigma_p may sit from 1 for a point to count as on the unit sphere.
SPHERE_TOL = 1e-10
#: Bracket expansion limit for the bisection, as a power of two.
MAX_EXPAND = 64


class NoBracket(SeqSpaceError):
    pass


class NotOnSphere(SeqSpaceError):
    pass


class ExponentRangeError(SeqSpaceError):
    """Raised where a result needs p_n > 1 for every n."""


@dataclass(frozen=True)
class NormResult:
    value: float
    iterations: int = 0
    residual: float = 0.0


def _exponents_for(p, n):
    p = exponent_stats(p)
    if p.N < n:
        raise LengthMismatch(f"exponents cover {p.N} terms, sequence has {n}")
    return p, p.p[:n]


def _image(params, p, x):
    x = as_sequence(x)
    p, pn = _exponents_for(p, x.N)
    return forward_transform(params, x).values, p, pn


def _require_above_one(pn):
    low = np.flatnonzero(pn <= 1.0)
    if low.size:
        raise ExponentRangeError(int(low[0]), "needs p_n > 1")


def modular(params, p, x):
    """sigma_p(x) = sum_n |y_n|^{p_n}."""
    y, _, pn = _image(params, p, x)
    return float(np.sum(np.abs(y) ** pn))


def paranorm_h_tilde(params, p, x):
    y, p, pn = _image(params, p, x)
    return float(np.sum(np.abs(y) ** pn) ** (1.0 / p.M))


def paranorm_h(params, p, x):
    y, p, pn = _image(params, p, x)
    return float(np.max(np.abs(y) ** (pn / p.M)))


def maddox_paranorm(p, y, space):
    """Paranorm of l(p) (``space="sum"``) or of l_inf(p), c(p), c_0(p) (``"sup"``)."""
    y = as_array(y)
    p, pn = _exponents_for(p, y.size)
    terms = np.abs(y) ** pn
    if space == "sum":
        return float(np.sum(terms) ** (1.0 / p.M))
    if space == "sup":
        return float(np.max(terms ** (1.0 / p.M)))
    raise ValueError(f"space must be 'sum' or 'sup', not {space!r}")


def luxemburg_from_image(y, pn, tol=1e-12):
    """inf{c > 0 : sum |y_n / c|^{p_n} <= 1} by bracketing and bisection."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    absy = np.abs(np.asarray(y, dtype=float))
    pn = np.ascontiguousarray(pn, dtype=float)
    if not np.any(absy):
        return NormResult(0.0, 0, 0.0)
    c, res, it, status = _kernels.luxemburg(absy, pn, tol, MAX_EXPAND)
    if status:
        raise NoBracket(f"bracket left [2^-{MAX_EXPAND}, 2^{MAX_EXPAND}]")
    return NormResult(float(c), int(it), float(res))


def luxemburg_norm(params, p, x, tol=1e-12):
    """Luxemburg norm of x; requires p_n > 1 on the prefix.

    ``residual`` is |sigma_p(x/c) - 1| at the returned c. Bisection stops once
    it drops to ``tol`` or the bracket can no longer be halved in floating
    point, whichever comes first.
    """
    y, _, pn = _image(params, p, x)
    _require_above_one(pn)
    return luxemburg_from_image(y, pn, tol)


@dataclass(frozen=True)
class MidpointReport:
    sigma_mid: float
    strictly_less: bool
    gap: float


def midpoint_strictness(params, p, y, z):
    """Evaluate sigma_p((y + z)/2) for two points on the unit sphere."""
    y, z = as_sequence(y), as_sequence(z)
    if y.N != z.N:
        raise LengthMismatch("y and z differ in length")
    _, pn = _exponents_for(p, y.N)
    _require_above_one(pn)
    for name, v in (("y", y), ("z", z)):
        sig = modular(params, p, v)
        if abs(sig - 1.0) > SPHERE_TOL:
            raise NotOnSphere(name, f"sigma={sig!r}")
    gap = float(np.max(np.abs(y.values - z.values)))
    mid = modular(params, p, 0.5 * (y.values + z.values))
    return MidpointReport(mid, gap > STRICTNESS_GAP, gap)


@dataclass(frozen=True)
class ConvergenceTrace:
    m: np.ndarray
    sigma: np.ndarray
    distance: np.ndarray

    def __len__(self):
        return self.m.size

    @property
    def strictly_decreasing(self):
        return bool(np.all(np.diff(self.distance) < 0))


def modular_convergence_harness(params, p, x, m_max, perturbation=None, tol=1e-12):
    """Trace sigma_p(x^m) and ||x^m - x|| for x^m -> x coordinatewise.

    x^m = (1 - 2^-m) x + 4^-m w, where w is ``perturbation`` rescaled to half
    the norm of x (zero when no perturbation is given). With that scaling the
    distance column is strictly decreasing from m = 1 on.
    """
    x = as_sequence(x)
    if not np.any(x.values):
        raise ValueError("x must be nonzero")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    base = luxemburg_norm(params, p, x, tol).value
    w = np.zeros(x.N)
    if perturbation is not None:
        w = as_array(perturbation).astype(float)
        if w.size != x.N:
            raise LengthMismatch("perturbation and x differ in length")
        wn = luxemburg_norm(params, p, w, tol).value if np.any(w) else 0.0
        if wn:
            w = w * (0.5 * base / wn)
    ms = np.arange(1, m_max + 1)
    sig = np.empty(m_max)
    dist = np.empty(m_max)
    for i, m in enumerate(ms):
        xm = (1.0 - 2.0 ** -m) * x.values + 4.0 ** -m * w
        sig[i] = modular(params, p, xm)
        dist[i] = luxemburg_norm(params, p, xm - x.values, tol).value
    return ConvergenceTrace(ms, sig, dist)
