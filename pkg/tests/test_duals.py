import numpy as np
import pytest

from seqspace.conditions import Bounds, InsufficientTruncation, Status
from seqspace.core import GeneralizedMeansParams, IndexOutOfRange, LengthMismatch
from seqspace.duals import (
    DUAL_KINDS,
    SPACES,
    MixedExponentBranch,
    UnsupportedMapping,
    abel_identity_check,
    alpha_dual_matrix,
    alpha_dual_matrix_entry,
    beta_gamma_matrix,
    beta_gamma_matrix_entry,
    dual_membership,
    e_tilde_entry,
    e_tilde_matrix,
    matrix_map_check,
)
from seqspace.sources import generator
from seqspace.triangle import inverse_matrix

from conftest import identity_like, well_conditioned

N = 64
P2 = np.full(N, 2.0)


def summation_like(n):
    return GeneralizedMeansParams(np.ones(n), np.ones(n), np.ones(n))


class TestMatrices:
    def test_alpha_entries(self, rng):
        a = rng.uniform(-1.0, 1.0, 6)
        assert alpha_dual_matrix_entry(identity_like(6), np.zeros(6), 3, 1) == 0.0
        assert alpha_dual_matrix_entry(identity_like(6), a, 4, 2) == a[4]
        params = summation_like(6)
        assert alpha_dual_matrix_entry(params, a, 3, 3) == a[3]
        assert alpha_dual_matrix_entry(params, a, 3, 1) == 0.0
        with pytest.raises(IndexOutOfRange):
            alpha_dual_matrix_entry(params, a, 1, 2)

    def test_alpha_block_matches_entries(self, rng):
        params = well_conditioned(rng, 10)
        a = rng.uniform(-1.0, 1.0, 10)
        block = alpha_dual_matrix(params, a, 10)
        for n in range(10):
            for k in range(n + 1):
                assert block[n, k] == pytest.approx(alpha_dual_matrix_entry(params, a, n, k), rel=1e-12, abs=1e-14)
        assert np.allclose(block, a[:, None] * inverse_matrix(params, 10))

    def test_e_entries(self, rng):
        a = rng.uniform(-1.0, 1.0, 7)
        assert beta_gamma_matrix_entry(identity_like(7), np.zeros(7), 5, 2) == 0.0
        for n in range(7):
            for k in range(n + 1):
                assert beta_gamma_matrix_entry(identity_like(7), a, n, k) == pytest.approx(a[k:n + 1].sum())
        params = GeneralizedMeansParams([1.0, 2.0], [1.0, 0.5], [1.0, 4.0])
        assert beta_gamma_matrix_entry(params, [0.0, 8.0], 1, 1) == 4.0

    def test_e_block_matches_entries(self, rng):
        params = well_conditioned(rng, 12)
        a = rng.uniform(-1.0, 1.0, 12)
        block = beta_gamma_matrix(params, a, 12)
        for n in range(12):
            for k in range(n + 1):
                assert block[n, k] == pytest.approx(beta_gamma_matrix_entry(params, a, n, k), rel=1e-10, abs=1e-12)

    def test_e_tilde(self, rng):
        params = identity_like(6)
        assert e_tilde_entry(params, np.zeros((6, 6)), 4, 1) == 0.0
        assert all(e_tilde_entry(params, np.eye(6), 4, k) == 1.0 for k in range(5))
        # one nonzero row reduces to the E entry of that row
        row = rng.uniform(-1.0, 1.0, 6)
        A = np.zeros((6, 6))
        A[5] = row
        p = well_conditioned(rng, 6)
        for k in range(6):
            assert e_tilde_entry(p, A, 5, k) == pytest.approx(beta_gamma_matrix_entry(p, row, 5, k))
        assert np.allclose(e_tilde_matrix(p, A, 6)[5], beta_gamma_matrix(p, row, 6)[5])


class TestAbel:
    def test_zero(self):
        assert abel_identity_check(identity_like(3), np.zeros(3), [1.0, 2.0, 3.0], 2) == (0.0, 0.0)

    def test_identity_like_example(self):
        assert abel_identity_check(identity_like(2), [1.0, 1.0], [1.0, 2.0], 1) == (3.0, 3.0)

    def test_length(self):
        with pytest.raises(LengthMismatch):
            abel_identity_check(identity_like(3), np.ones(3), np.ones(3), 3)

    def test_well_conditioned_random(self, rng):
        for _ in range(100):
            n = int(rng.integers(0, 33))
            params = well_conditioned(rng, n + 1)
            a, x = rng.uniform(-5.0, 5.0, n + 1), rng.uniform(-5.0, 5.0, n + 1)
            lhs, rhs = abel_identity_check(params, a, x, n)
            assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(lhs))


class TestMembership:
    @pytest.mark.parametrize("kind", DUAL_KINDS)
    @pytest.mark.parametrize("space", SPACES)
    def test_zero_holds(self, kind, space):
        v = dual_membership(np.zeros(N), identity_like(N), P2, kind, space)
        assert v.status is Status.HOLDS

    def test_gamma_geometric_holds(self):
        a = 0.5 ** np.arange(N)
        assert dual_membership(a, identity_like(N), P2, "gamma", "l").status is Status.HOLDS

    def test_gamma_linear_diverges(self):
        a = np.arange(float(N))
        assert dual_membership(a, identity_like(N), P2, "gamma", "l").status is Status.DIVERGES

    def test_beta_summable_series(self):
        v = dual_membership(1.0 / np.arange(1.0, N + 1) ** 2, identity_like(N), P2, "beta", "l")
        b1 = next(c for c in v.components if c.label == "B1")
        assert b1.status is Status.HOLDS

    def test_beta_alternating_inconclusive(self):
        v = dual_membership((-1.0) ** np.arange(N), identity_like(N), P2, "beta", "l")
        b1 = next(c for c in v.components if c.label == "B1")
        assert b1.status is Status.INCONCLUSIVE
        assert v.status is Status.INCONCLUSIVE

    def test_mixed_exponents(self):
        p = np.where(np.arange(N) % 2 == 0, 0.5, 2.0)
        with pytest.raises(MixedExponentBranch) as exc:
            dual_membership(0.5 ** np.arange(N), identity_like(N), p, "gamma", "l")
        assert set(exc.value.branches) == {"<=1", ">1"}

    def test_bundle_labels(self):
        v = dual_membership(np.zeros(N), identity_like(N), P2, "beta", "c")
        assert [c.label for c in v.components] == ["B1", "B2", "B3", "B6[4.11]", "B9[4.19]",
                                                  "B10[4.18]", "B11[4.23]"]

    def test_short_sequence(self):
        with pytest.raises(InsufficientTruncation):
            dual_membership(np.zeros(4), identity_like(4), np.full(4, 2.0), "gamma", "l")


class TestMaps:
    def test_zero_matrix(self):
        v = matrix_map_check(np.zeros((N, N)), identity_like(N), P2, "linf")
        assert v.status is Status.HOLDS

    def test_identity_is_inconclusive(self):
        v = matrix_map_check(generator("identity"), identity_like(N), P2, "linf")
        assert v.status is Status.INCONCLUSIVE

    def test_geometric_diagonal_holds(self):
        v = matrix_map_check(generator("diagonal-geometric", ratio=0.5), identity_like(N), P2, "linf")
        assert v.status is Status.HOLDS

    def test_components(self):
        v = matrix_map_check(np.zeros((N, N)), identity_like(N), np.ones(N), "cq", q=np.ones(N),
                             domain="c", bounds=Bounds(n_rows=4))
        labels = [c.label for c in v.components]
        assert labels == ["E~[4.11]", "E~[4.18]", "E~[4.19]", "E~[4.23]", "rows in beta-dual/c"]
        assert len(v.components[-1].components) == 4

    def test_domain_rules(self):
        with pytest.raises(UnsupportedMapping):
            matrix_map_check(np.zeros((N, N)), identity_like(N), P2, "linf", domain="c0")
        with pytest.raises(UnsupportedMapping):
            matrix_map_check(np.zeros((N, N)), identity_like(N), P2, "c0q", q=P2)
