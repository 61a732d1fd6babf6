"""Tests for block partitioning, padding, direct sums and the shuffle permutation."""
import unittest
from unittest.mock import patch

import numpy as np

from src.core.blocks import (
    assemble,
    direct_sum_copies,
    eigen_index_map,
    pad_to_dyadic,
    partial_trace,
    partition,
    shuffle_permutation,
    smallest_dyadic,
    tensor_product,
)
from src.core.exceptions import NotPSDError, ParameterError, ResourceLimitError, ShapeError
from src.core.linalg import spectrum
from src.utils.config import Config

ONES = np.array([[1.0, 1.0], [1.0, 1.0]])
X_CONTROL = np.array([1.0, 0.0, 0.0, 1.0])


class TestPartition(unittest.TestCase):

    def test_identity(self):
        print("\n>>> Testing partition of I_4...")
        h = partition(np.eye(4), 2, 2)
        np.testing.assert_allclose(h.block(0, 0), np.eye(2))
        np.testing.assert_allclose(h.block(1, 1), np.eye(2))
        np.testing.assert_allclose(h.block(0, 1), np.zeros((2, 2)))
        self.assertTrue(h.hermitian_blocks)

    def test_rank_one_control_has_non_hermitian_block(self):
        h = partition(np.outer(X_CONTROL, X_CONTROL), 2, 2)
        np.testing.assert_allclose(h.block(0, 1), [[0, 1], [0, 0]])
        self.assertFalse(h.hermitian_blocks)

    def test_scalar_blocks(self):
        h = partition(np.array([[2.0, 1.0], [1.0, 3.0]]), 2, 1)
        self.assertTrue(h.hermitian_blocks)
        self.assertEqual(h.dim, 2)

    def test_errors(self):
        with self.assertRaises(ShapeError):
            partition(np.eye(5), 2, 2)
        with self.assertRaises(NotPSDError):
            partition(np.diag([1.0, -1.0]), 2, 1)
        with self.assertRaises(ShapeError):
            partition(np.eye(4), 2, 2).block(2, 0)

    def test_assemble_inverts_partition(self):
        rng = np.random.default_rng(2)
        g = rng.standard_normal((6, 6))
        h = partition(g @ g.T, 3, 2)
        np.testing.assert_allclose(assemble(h.blocks()), h.carrier)


class TestPartialTrace(unittest.TestCase):

    def test_examples(self):
        print("\n>>> Testing partial trace...")
        np.testing.assert_allclose(partial_trace(partition(np.eye(4), 2, 2)), 2 * np.eye(2))
        np.testing.assert_allclose(partial_trace(partition(np.array([[2.0, 1.0], [1.0, 3.0]]), 2, 1)), [[5.0]])
        h = partition(np.kron(np.diag([1.0, 2.0]), ONES), 2, 2)
        np.testing.assert_allclose(partial_trace(h), 3 * ONES)


class TestPadding(unittest.TestCase):

    def test_smallest_dyadic(self):
        self.assertEqual([smallest_dyadic(a) for a in (1, 2, 3, 4, 5, 9)], [1, 2, 4, 4, 8, 16])
        with self.assertRaises(ParameterError):
            smallest_dyadic(0)

    def test_three_blocks_pad_to_four(self):
        print("\n>>> Testing dyadic padding...")
        h = partition(np.diag([1.0, 2.0, 3.0]), 3, 1)
        padded = pad_to_dyadic(h)
        self.assertEqual(padded.beta, 4)
        self.assertEqual(padded.dim, 4)
        self.assertEqual(padded.padded_from, 3)
        np.testing.assert_allclose(padded.spectrum().values, [3, 2, 1, 0])
        np.testing.assert_allclose(partial_trace(padded), partial_trace(h))

    def test_dyadic_unchanged(self):
        h = partition(np.eye(8), 4, 2)
        self.assertIs(pad_to_dyadic(h), h)


class TestDirectSum(unittest.TestCase):

    def test_examples(self):
        a = np.diag([3.0, 1.0])
        np.testing.assert_allclose(direct_sum_copies(a, 1), a)
        np.testing.assert_allclose(spectrum(direct_sum_copies(a, 2)).values, [3, 3, 1, 1])
        np.testing.assert_allclose(direct_sum_copies(np.zeros((2, 2)), 3), np.zeros((6, 6)))

    def test_cap(self):
        with patch.object(Config, "MAX_DENSE_DIM", 4):
            with self.assertRaises(ResourceLimitError):
                direct_sum_copies(np.eye(3), 2)

    def test_eigen_index_map(self):
        print("\n>>> Testing eigen index map...")
        self.assertEqual(eigen_index_map(np.diag([3.0, 1.0]), 2, 2), (1.0, 1.0))
        left, right = eigen_index_map(np.diag([3.0, 1.0]), 3, 0)
        self.assertEqual(left, right)
        self.assertEqual(eigen_index_map(np.diag([5.0]), 4, 3), (5.0, 5.0))
        for j in range(8):
            left, right = eigen_index_map(np.diag([4.0, 2.0, 1.0]), 2, j)
            self.assertAlmostEqual(left, right)


class TestShuffle(unittest.TestCase):

    def test_identity_for_single_copy(self):
        perm = shuffle_permutation(1, 3, 2)
        np.testing.assert_array_equal(perm.image, np.arange(6))

    def test_two_by_two(self):
        print("\n>>> Testing shuffle permutation...")
        perm = shuffle_permutation(2, 2, 1)
        np.testing.assert_array_equal(perm.image, [0, 2, 1, 3])

    def test_conjugation_gives_copies(self):
        rng = np.random.default_rng(4)
        beta, n, m = 2, 2, 4
        g = rng.standard_normal((beta * n, beta * n)) + 1j * rng.standard_normal((beta * n, beta * n))
        h = partition(g @ g.conj().T, beta, n, check_psd=True)
        copies_by_block = np.block([[np.kron(np.eye(m), h.block(s, t)) for t in range(beta)] for s in range(beta)])
        perm = shuffle_permutation(m, beta, n)
        np.testing.assert_array_equal(perm.conjugate(copies_by_block), direct_sum_copies(h.carrier, m))
        p = perm.matrix()
        np.testing.assert_allclose(p @ copies_by_block @ p.T, direct_sum_copies(h.carrier, m))

    def test_inverse_and_adjoint(self):
        perm = shuffle_permutation(2, 4, 3)
        x = np.arange(perm.size, dtype=float)
        np.testing.assert_array_equal(perm.apply_adjoint(perm.apply(x)), x)
        np.testing.assert_array_equal(perm.inverse().apply(perm.apply(x)), x)

    def test_rejects_non_bijection(self):
        from src.core.blocks import Permutation
        with self.assertRaises(ParameterError):
            Permutation(np.array([0, 0, 1]))


class TestTensorProduct(unittest.TestCase):

    def test_examples(self):
        b = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_allclose(tensor_product(np.eye(2), b), np.block([[b, np.zeros((2, 2))], [np.zeros((2, 2)), b]]))
        np.testing.assert_allclose(tensor_product(np.diag([1.0, 2.0]), np.eye(2)), np.diag([1.0, 1.0, 2.0, 2.0]))
        flip = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(tensor_product(flip, flip), np.fliplr(np.eye(4)))


if __name__ == "__main__":
    unittest.main()
