"""Tests for the pinch, two-block and Clifford decompositions."""
import math
import unittest
from unittest.mock import patch

import numpy as np

from src.core.blocks import direct_sum_copies, pad_to_dyadic, partial_trace, partition
from src.core.decompose import (
    clifford_W,
    clifford_decompose,
    clifford_generator,
    clifford_intermediates,
    hadamard_reflection,
    omega,
    pinch_decompose,
    probe_isometry_defect,
    probe_residual,
    two_block_hermitian_decompose,
)
from src.core.exceptions import NonHermitianBlocksError, ParameterError, ResourceLimitError
from src.core.linalg import frobenius, hermitian, is_isometry, isometry_defect, spectrum
from src.core.structured import KroneckerStage, SumOperator, to_dense
from src.utils.config import Config

ONES = np.array([[1.0, 1.0], [1.0, 1.0]])


def hermitian_block_instance(rng, beta, n, complex_entries=True):
    """Random PSD matrix whose blocks are all Hermitian: sum of tensor products R_j (x) B_j with R_j real."""
    total = np.zeros((beta * n, beta * n), dtype=complex)
    for _ in range(beta):
        r = rng.standard_normal((beta, beta))
        g = rng.standard_normal((n, n))
        if complex_entries:
            g = g + 1j * rng.standard_normal((n, n))
        total += np.kron(r @ r.T, g @ g.conj().T)
    return partition(total, beta, n)


class TestPinch(unittest.TestCase):

    def test_block_diagonal(self):
        print("\n>>> Testing pinch decomposition of A (+) B...")
        h = partition(np.diag([2.0, 1.0, 3.0, 4.0]), 2, 2)
        d = pinch_decompose(h)
        np.testing.assert_allclose(np.abs(d.isometries[0]), np.vstack([np.eye(2), np.zeros((2, 2))]), atol=1e-12)
        self.assertLessEqual(d.residual(h.carrier), 1e-12)

    def test_all_ones(self):
        h = partition(ONES, 2, 1)
        d = pinch_decompose(h)
        for v in d.isometries:
            np.testing.assert_allclose(np.abs(v).ravel(), [1 / math.sqrt(2)] * 2, atol=1e-12)
        self.assertLessEqual(d.residual(h.carrier), 1e-12)

    def test_zero_diagonal_block(self):
        h = partition(np.diag([0.0, 0.0, 1.0, 2.0]), 2, 2)
        d = pinch_decompose(h)
        self.assertTrue(all(is_isometry(v) for v in d.isometries))
        self.assertLessEqual(d.residual(h.carrier), 1e-12)

    def test_no_hermitian_block_hypothesis_needed(self):
        x = np.array([1.0, 0.0, 0.0, 1.0])
        h = partition(np.outer(x, x), 2, 2)
        self.assertFalse(h.hermitian_blocks)
        d = pinch_decompose(h)
        self.assertLessEqual(d.residual(h.carrier), 1e-10)

    def test_three_blocks_random(self):
        rng = np.random.default_rng(8)
        g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        h = partition(g @ g.conj().T, 3, 2)
        d = pinch_decompose(h)
        self.assertLessEqual(d.residual(h.carrier), 1e-9 * frobenius(h.carrier))
        self.assertEqual(len(d.isometries), 3)


class TestTwoBlock(unittest.TestCase):

    def test_all_ones(self):
        print("\n>>> Testing two-block Hermitian decomposition...")
        h = partition(ONES, 2, 1)
        d = two_block_hermitian_decompose(h)
        self.assertEqual(d.weight, 0.5)
        self.assertLessEqual(d.residual(h.carrier), 1e-12)
        for v in d.isometries:
            self.assertTrue(is_isometry(v))

    def test_identity(self):
        h = partition(np.eye(4), 2, 2)
        d = two_block_hermitian_decompose(h)
        np.testing.assert_allclose(d.summand, 2 * np.eye(2))
        self.assertLessEqual(d.residual(h.carrier), 1e-10)

    def test_negative_off_diagonal(self):
        h = partition(np.array([[1.0, -1.0], [-1.0, 1.0]]), 2, 1)
        d = two_block_hermitian_decompose(h)
        self.assertLessEqual(d.residual(h.carrier), 1e-12)
        for v in d.isometries:
            self.assertAlmostEqual(np.linalg.norm(v), 1.0)

    def test_isometries_carry_complex_phases(self):
        h = partition(np.array([[2.0, 0.5], [0.5, 1.0]]), 2, 1)
        d = two_block_hermitian_decompose(h)
        self.assertLessEqual(d.residual(h.carrier), 1e-12)
        v = d.isometries[0]
        self.assertGreater(abs((v[1, 0] / v[0, 0]).imag), 1e-3)

    def test_random_complex(self):
        rng = np.random.default_rng(12)
        h = hermitian_block_instance(rng, 2, 3)
        self.assertTrue(h.hermitian_blocks)
        d = two_block_hermitian_decompose(h)
        self.assertLessEqual(d.residual(h.carrier), 1e-9 * frobenius(h.carrier))
        self.assertTrue(max(d.isometry_defects()) <= 1e-9)

    def test_errors(self):
        with self.assertRaises(ParameterError):
            two_block_hermitian_decompose(partition(np.eye(3), 3, 1))
        x = np.array([1.0, 0.0, 0.0, 1.0])
        with self.assertRaises(NonHermitianBlocksError):
            two_block_hermitian_decompose(partition(np.outer(x, x), 2, 2))


class TestCliffordPieces(unittest.TestCase):

    def test_generators(self):
        print("\n>>> Testing Clifford generators...")
        flip = np.array([[0, 1], [1, 0]])
        np.testing.assert_array_equal(clifford_generator(1, 2), np.kron(flip, np.eye(2, dtype=int)))
        np.testing.assert_array_equal(clifford_generator(2, 2), np.kron(np.diag([1, -1]), flip))
        with self.assertRaises(ParameterError):
            clifford_generator(3, 2)

    def test_anticommutation(self):
        for beta in (2, 4, 8):
            qs = [clifford_generator(j, beta) for j in range(1, beta + 1)]
            eye = np.eye(2 ** beta, dtype=np.int64)
            for i, qi in enumerate(qs):
                np.testing.assert_array_equal(qi @ qi, eye)
                np.testing.assert_array_equal(qi, qi.T)
                for qj in qs[i + 1:]:
                    self.assertFalse(np.any(qi @ qj + qj @ qi))

    def test_w_is_hermitian_involution(self):
        w = clifford_W(2, 1).to_dense()
        self.assertEqual(w.shape, (8, 8))
        np.testing.assert_array_equal(w, w.conj().T)
        np.testing.assert_allclose(w @ w, np.eye(8))
        w4 = clifford_W(4, 2).to_dense()
        np.testing.assert_allclose(w4 @ w4, np.eye(w4.shape[0]))

    def test_hadamard_reflection(self):
        j1 = hadamard_reflection(1)
        np.testing.assert_allclose(j1, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
        j2 = hadamard_reflection(2)
        np.testing.assert_allclose(j2, np.kron(j1, j1))
        self.assertLessEqual(np.abs(j2 @ j2 - np.eye(4)).max(), 1e-14)

    def test_reflection_averages_antisymmetric_diagonal(self):
        rng = np.random.default_rng(1)
        for p in (1, 2, 3):
            side = 2 ** p
            s = rng.standard_normal((side, side))
            s = np.triu(s, 1) - np.triu(s, 1).T + np.diag(rng.standard_normal(side))
            j = hadamard_reflection(p)
            rotated = j @ s @ j.T
            np.testing.assert_allclose(np.diag(rotated), np.trace(s) / side, atol=1e-12)

    def test_omega_structure(self):
        print("\n>>> Testing Omega antisymmetry...")
        rng = np.random.default_rng(21)
        h = hermitian_block_instance(rng, 2, 1)
        om = omega(h)
        m, side = 4, 4
        upper = om[:side, side:]
        lower = om[side:, :side]
        self.assertLessEqual(frobenius(upper + lower), 1e-12 * (1 + frobenius(h.carrier)))
        np.testing.assert_allclose(om[:side, :side], np.kron(np.eye(m), h.block(0, 0)), atol=1e-12)

    def test_omega_of_block_diagonal(self):
        h = partition(np.diag([1.0, 2.0]), 2, 1)
        om = omega(h)
        self.assertLessEqual(frobenius(om[:4, 4:]), 1e-14)

    def test_rotated_diagonal_blocks_equal_d(self):
        rng = np.random.default_rng(5)
        h = hermitian_block_instance(rng, 4, 1)
        inter = clifford_intermediates(h)
        side = inter.m * inter.n
        for k in range(inter.beta):
            block = inter.rotated[k * side:(k + 1) * side, k * side:(k + 1) * side]
            self.assertLessEqual(frobenius(block - inter.D), 1e-9 * (1 + frobenius(h.carrier)))


class TestCliffordDecompose(unittest.TestCase):

    def _assert_reconstructs(self, h, d, tol):
        target = direct_sum_copies(h.carrier, d.m)
        self.assertLessEqual(d.residual(target), tol)
        for defect in d.isometry_defects():
            self.assertLessEqual(defect, 1e-9)

    def test_all_ones(self):
        print("\n>>> Testing Clifford decomposition beta=2...")
        h = partition(ONES, 2, 1)
        d = clifford_decompose(h)
        self.assertEqual(d.m, 4)
        self.assertEqual(d.weight, 0.5)
        self.assertEqual(d.isometries[0].shape, (8, 4))
        self._assert_reconstructs(h, d, 1e-10)

    def test_block_diagonal(self):
        h = partition(np.diag([1.0, 3.0, 2.0, 5.0]), 2, 2)
        d = clifford_decompose(h)
        self._assert_reconstructs(h, d, 1e-12 * (1 + frobenius(h.carrier)) * 10)

    def test_beta_four_random(self):
        print("\n>>> Testing Clifford decomposition beta=4, n=2...")
        rng = np.random.default_rng(44)
        h = hermitian_block_instance(rng, 4, 2)
        d = clifford_decompose(h)
        self.assertEqual(d.target_dim, 128)
        self._assert_reconstructs(h, d, 1e-9 * frobenius(h.carrier))

    def test_majorization_consequence(self):
        rng = np.random.default_rng(3)
        h = hermitian_block_instance(rng, 2, 2)
        d = clifford_decompose(h)
        lhs = spectrum(direct_sum_copies(h.carrier, d.m)).prefix_sums()
        rhs = spectrum(direct_sum_copies(partial_trace(h), d.m)).padded(len(lhs))
        self.assertTrue(np.all(lhs <= np.cumsum(rhs) + 1e-8))

    def test_structured_matches_materialized(self):
        rng = np.random.default_rng(9)
        for beta, n in ((2, 1), (2, 2), (4, 1)):
            h = hermitian_block_instance(rng, beta, n)
            dense = clifford_decompose(h, materialize=True)
            lazy = clifford_decompose(h, materialize=False)
            self.assertFalse(lazy.materialized)
            self._assert_reconstructs(h, lazy, 1e-9 * (1 + frobenius(h.carrier)))
            self.assertLessEqual(probe_residual(h, dense), 1e-9 * (1 + frobenius(h.carrier)))
            self.assertLessEqual(probe_residual(h, lazy), 1e-9 * (1 + frobenius(h.carrier)))

    def test_structured_beta_eight(self):
        print("\n>>> Testing structured Clifford decomposition beta=8...")
        rng = np.random.default_rng(88)
        h = hermitian_block_instance(rng, 8, 1, complex_entries=False)
        d = clifford_decompose(h, materialize=False)
        self.assertEqual(d.m, 256)
        self.assertEqual(d.isometries[0].shape, (2048, 256))
        self.assertLessEqual(probe_residual(h, d, probes=4, seed=1), 1e-8 * max(1.0, frobenius(h.carrier)))

    def test_structured_isometries_match_materialized_entrywise(self):
        rng = np.random.default_rng(19)
        for beta, n in ((2, 1), (2, 2), (4, 1)):
            h = hermitian_block_instance(rng, beta, n)
            dense = clifford_decompose(h, materialize=True)
            lazy = clifford_decompose(h, materialize=False)
            for v_dense, v_lazy in zip(dense.isometries, lazy.isometries):
                np.testing.assert_allclose(to_dense(v_lazy), v_dense, atol=1e-7)

    def test_structured_singular_partial_trace(self):
        print("\n>>> Testing structured Clifford decomposition with singular Delta...")
        h = partition(np.kron(ONES + np.eye(2), np.diag([1.0, 0.0])), 2, 2)
        self.assertTrue(h.hermitian_blocks)
        np.testing.assert_allclose(partial_trace(h), np.diag([4.0, 0.0]))
        lazy = clifford_decompose(h, materialize=False)
        self.assertTrue(all(isinstance(v, SumOperator) for v in lazy.isometries))
        for v in lazy.isometries:
            self.assertLessEqual(isometry_defect(to_dense(v)), 1e-7)
        target = direct_sum_copies(h.carrier, lazy.m)
        self.assertLessEqual(lazy.residual(target), 1e-9 * (1 + frobenius(h.carrier)))
        self.assertLessEqual(probe_residual(h, lazy), 1e-9 * (1 + frobenius(h.carrier)))

    def test_isometry_defect_estimate(self):
        rng = np.random.default_rng(21)
        h = hermitian_block_instance(rng, 2, 2)
        lazy = clifford_decompose(h, materialize=False)
        for v in lazy.isometries:
            self.assertLessEqual(probe_isometry_defect(v, probes=5), 1e-9)
        self.assertAlmostEqual(probe_isometry_defect(KroneckerStage([2.0 * np.eye(3)])), 3.0)

    def test_padded_three_blocks(self):
        rng = np.random.default_rng(30)
        g = rng.standard_normal((3, 3))
        h = pad_to_dyadic(partition(g @ g.T, 3, 1))
        d = clifford_decompose(h)
        self._assert_reconstructs(h, d, 1e-9 * (1 + frobenius(h.carrier)))

    def test_limits(self):
        with self.assertRaises(ParameterError):
            clifford_decompose(partition(np.eye(3), 3, 1))
        with self.assertRaises(ParameterError):
            clifford_decompose(partition(np.eye(2), 1, 2))
        with self.assertRaises(ResourceLimitError):
            clifford_decompose(partition(np.eye(8), 8, 1), materialize=True)
        with self.assertRaises(ResourceLimitError):
            clifford_decompose(partition(np.eye(16), 16, 1), materialize=False)
        with patch.object(Config, "MAX_DENSE_DIM", 64):
            with self.assertRaises(ResourceLimitError):
                clifford_decompose(partition(np.eye(8), 4, 2))

    def test_non_hermitian_blocks_refused(self):
        x = np.array([1.0, 0.0, 0.0, 1.0])
        with self.assertRaises(NonHermitianBlocksError):
            clifford_decompose(partition(np.outer(x, x), 2, 2))


if __name__ == "__main__":
    unittest.main()
