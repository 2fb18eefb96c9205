import math

import numpy as np
import pytest

from seqspace.core import ZeroEntry, validate_params
from seqspace.factories import (
    EULER_MAX_N,
    AlphaOutOfRange,
    TruncationTooLarge,
    a_alpha_params,
    cesaro_params,
    euler_params,
    weighted_mean_params,
)
from seqspace.triangle import forward_transform, materialize_operator, means_matrix_entry


def test_weighted_entries():
    params = weighted_mean_params([2, 3], [5, 7])
    assert means_matrix_entry(params, 1, 0) == 15.0
    assert means_matrix_entry(params, 1, 1) == 21.0


def test_weighted_all_ones_is_summation():
    A = materialize_operator(weighted_mean_params(np.ones(5), np.ones(5)), 5, "A").entries
    assert np.array_equal(A, np.tril(np.ones((5, 5))))


def test_weighted_zero():
    with pytest.raises(ZeroEntry):
        weighted_mean_params([1], [0])


def test_weighted_exact_random(rng):
    u, v = rng.uniform(-3, 3, 12), rng.uniform(-3, 3, 12)
    A = materialize_operator(weighted_mean_params(u, v), 12, "A").entries
    assert np.array_equal(A, np.tril(np.outer(u, v)))


def test_cesaro():
    params = cesaro_params(4)
    assert [means_matrix_entry(params, 2, k) for k in range(3)] == pytest.approx([1 / 3] * 3)
    assert means_matrix_entry(params, 0, 0) == 1.0
    x = np.arange(1.0, 5.0) ** 2
    assert np.allclose(forward_transform(params, x).values, x / np.arange(1, 5), atol=1e-12)


def test_euler():
    params = euler_params(0.5, 3)
    assert means_matrix_entry(params, 2, 1) == pytest.approx(0.5, abs=1e-15)
    assert means_matrix_entry(euler_params(0.3, 2), 0, 0) == 1.0


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_euler_binomial(alpha):
    A = materialize_operator(euler_params(alpha, EULER_MAX_N), EULER_MAX_N, "A").entries
    expect = np.array([[math.comb(n, k) * alpha ** k * (1 - alpha) ** (n - k) if k <= n else 0.0
                        for k in range(EULER_MAX_N)] for n in range(EULER_MAX_N)])
    assert np.allclose(A, expect, rtol=1e-12, atol=1e-15)
    assert np.max(np.abs(A.sum(axis=1) - 1.0)) <= 1e-12


def test_euler_errors():
    with pytest.raises(AlphaOutOfRange):
        euler_params(1.0, 5)
    with pytest.raises(TruncationTooLarge):
        euler_params(0.5, EULER_MAX_N + 1)


def test_a_alpha():
    params = a_alpha_params(0.5, 4)
    assert means_matrix_entry(params, 1, 1) == 0.75
    assert [means_matrix_entry(params, n, 0) for n in range(4)] == pytest.approx([2 / (n + 1) for n in range(4)])
    with pytest.raises(AlphaOutOfRange):
        a_alpha_params(0.0, 3)


@pytest.mark.parametrize("params", [
    weighted_mean_params([1, 2, 3], [4, 5, 6]), cesaro_params(6), euler_params(0.4, 20),
    a_alpha_params(0.7, 6),
])
def test_outputs_validate(params):
    validate_params(params.r, params.s, params.t)
