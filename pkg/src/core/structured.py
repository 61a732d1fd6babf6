"""Lazy products of permutations, Kronecker factors and block-diagonal stages."""
import logging
from typing import Any, Dict, List, Sequence, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator

from src.core.blocks import Permutation, check_dense_size
from src.core.exceptions import ShapeError

logger = logging.getLogger(__name__)

# An int factor n stands for the identity I_n.
Factor = Union[int, np.ndarray]


def _factor_shape(f: Factor) -> tuple:
    if isinstance(f, (int, np.integer)):
        return (int(f), int(f))
    return f.shape


class PermutationStage(LinearOperator):
    """Permutation matrix applied by index relabeling."""

    def __init__(self, perm: Permutation):
        self.perm = perm
        super().__init__(dtype=np.complex128, shape=perm.shape)

    def _matvec(self, x):
        return self.perm.apply(np.asarray(x, dtype=complex).reshape(-1))

    def _matmat(self, x):
        return self.perm.apply(np.asarray(x, dtype=complex))

    def _rmatvec(self, y):
        return self.perm.apply_adjoint(np.asarray(y, dtype=complex).reshape(-1))

    def _rmatmat(self, y):
        return self.perm.apply_adjoint(np.asarray(y, dtype=complex))

    def to_dense(self) -> np.ndarray:
        return self.perm.matrix().astype(complex)

    def describe(self) -> Dict[str, Any]:
        return {"stage": "permutation", "size": self.perm.size, "image": self.perm.image.tolist()}


class KroneckerStage(LinearOperator):
    """K_0 (x) K_1 (x) ... applied one tensor axis at a time."""

    def __init__(self, factors: Sequence[Factor]):
        if not factors:
            raise ShapeError("Kronecker stage needs at least one factor")
        self.factors: List[Factor] = [
            int(f) if isinstance(f, (int, np.integer)) else np.asarray(f, dtype=complex) for f in factors
        ]
        shapes = [_factor_shape(f) for f in self.factors]
        rows = int(np.prod([s[0] for s in shapes]))
        cols = int(np.prod([s[1] for s in shapes]))
        super().__init__(dtype=np.complex128, shape=(rows, cols))

    def _apply(self, x: np.ndarray, adjoint: bool) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        batch = x.shape[1] if x.ndim == 2 else 1
        factors = self.factors
        if adjoint:
            factors = [f if isinstance(f, int) else f.conj().T for f in factors]
        in_dims = [_factor_shape(f)[1] for f in factors]
        t = x.reshape(in_dims + [batch])
        for axis, f in enumerate(factors):
            if isinstance(f, int):
                continue
            t = np.moveaxis(np.tensordot(f, t, axes=([1], [axis])), 0, axis)
        out = t.reshape(-1, batch)
        return out if x.ndim == 2 else out.reshape(-1)

    def _matvec(self, x):
        return self._apply(x, adjoint=False)

    def _matmat(self, x):
        return self._apply(x, adjoint=False)

    def _rmatvec(self, y):
        return self._apply(y, adjoint=True)

    def _rmatmat(self, y):
        return self._apply(y, adjoint=True)

    def to_dense(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for f in self.factors:
            out = np.kron(out, np.eye(f) if isinstance(f, int) else f)
        return out

    def describe(self) -> Dict[str, Any]:
        return {
            "stage": "kronecker",
            "factors": [
                {"identity": f} if isinstance(f, int) else {"dense": list(f.shape)} for f in self.factors
            ],
        }


class DenseStage(LinearOperator):
    def __init__(self, matrix: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=complex)
        super().__init__(dtype=np.complex128, shape=self.matrix.shape)

    def _matvec(self, x):
        return self.matrix @ np.asarray(x).reshape(-1)

    def _matmat(self, x):
        return self.matrix @ x

    def _rmatvec(self, y):
        return self.matrix.conj().T @ np.asarray(y).reshape(-1)

    def _rmatmat(self, y):
        return self.matrix.conj().T @ y

    def to_dense(self) -> np.ndarray:
        return self.matrix

    def describe(self) -> Dict[str, Any]:
        return {"stage": "dense", "shape": list(self.matrix.shape)}


class BlockDiagonalStage(LinearOperator):
    """Direct sum of operators acting on consecutive coordinate ranges."""

    def __init__(self, blocks: Sequence[Union[LinearOperator, np.ndarray]]):
        if not blocks:
            raise ShapeError("block-diagonal stage needs at least one block")
        self.blocks = [b if isinstance(b, LinearOperator) else DenseStage(b) for b in blocks]
        rows = sum(b.shape[0] for b in self.blocks)
        cols = sum(b.shape[1] for b in self.blocks)
        super().__init__(dtype=np.complex128, shape=(rows, cols))

    def _apply(self, x: np.ndarray, adjoint: bool) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        vector = x.ndim == 1
        x2 = x.reshape(-1, 1) if vector else x
        pieces = []
        offset = 0
        for b in self.blocks:
            width = b.shape[0] if adjoint else b.shape[1]
            chunk = x2[offset:offset + width]
            pieces.append(b.rmatmat(chunk) if adjoint else b.matmat(chunk))
            offset += width
        out = np.vstack(pieces)
        return out.reshape(-1) if vector else out

    def _matvec(self, x):
        return self._apply(x, adjoint=False)

    def _matmat(self, x):
        return self._apply(x, adjoint=False)

    def _rmatvec(self, y):
        return self._apply(y, adjoint=True)

    def _rmatmat(self, y):
        return self._apply(y, adjoint=True)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        r = c = 0
        for b in self.blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = to_dense(b)
            r += b.shape[0]
            c += b.shape[1]
        return out

    def describe(self) -> Dict[str, Any]:
        return {"stage": "block_diagonal", "blocks": [describe(b) for b in self.blocks]}


class StructuredOperator(LinearOperator):
    """
    Product stages[0] @ stages[1] @ ... @ stages[-1], never materialized.

    Vectors are pushed through the stages from the last to the first.
    """

    def __init__(self, stages: Sequence[LinearOperator]):
        if not stages:
            raise ShapeError("structured operator needs at least one stage")
        self.stages = list(stages)
        for left, right in zip(self.stages, self.stages[1:]):
            if left.shape[1] != right.shape[0]:
                raise ShapeError(f"stage dimensions do not chain: {left.shape} then {right.shape}")
        super().__init__(dtype=np.complex128, shape=(self.stages[0].shape[0], self.stages[-1].shape[1]))

    def _matvec(self, x):
        for stage in reversed(self.stages):
            x = stage.matvec(x)
        return x

    def _matmat(self, x):
        for stage in reversed(self.stages):
            x = stage.matmat(x)
        return x

    def _rmatvec(self, y):
        for stage in self.stages:
            y = stage.rmatvec(y)
        return y

    def _rmatmat(self, y):
        for stage in self.stages:
            y = stage.rmatmat(y)
        return y

    def to_dense(self) -> np.ndarray:
        check_dense_size(max(self.shape), "structured operator")
        return self.matmat(np.eye(self.shape[1], dtype=complex))

    def describe(self) -> Dict[str, Any]:
        return {
            "stage": "product",
            "rows": self.shape[0],
            "cols": self.shape[1],
            "stages": [describe(s) for s in self.stages],
        }


class SumOperator(LinearOperator):
    """terms[0] + terms[1] + ... for operators of one shape."""

    def __init__(self, terms: Sequence[LinearOperator]):
        if not terms:
            raise ShapeError("sum operator needs at least one term")
        self.terms = list(terms)
        shapes = {t.shape for t in self.terms}
        if len(shapes) != 1:
            raise ShapeError(f"summed operators must share one shape, got {sorted(shapes)}")
        super().__init__(dtype=np.complex128, shape=self.terms[0].shape)

    def _matvec(self, x):
        return sum(t.matvec(x) for t in self.terms)

    def _matmat(self, x):
        return sum(t.matmat(x) for t in self.terms)

    def _rmatvec(self, y):
        return sum(t.rmatvec(y) for t in self.terms)

    def _rmatmat(self, y):
        return sum(t.rmatmat(y) for t in self.terms)

    def to_dense(self) -> np.ndarray:
        check_dense_size(max(self.shape), "structured operator")
        return sum(to_dense(t) for t in self.terms)

    def describe(self) -> Dict[str, Any]:
        return {"stage": "sum", "terms": [describe(t) for t in self.terms]}


def to_dense(op: Union[LinearOperator, np.ndarray]) -> np.ndarray:
    if isinstance(op, np.ndarray):
        return op
    if hasattr(op, "to_dense"):
        return op.to_dense()
    return op.matmat(np.eye(op.shape[1], dtype=complex))


def describe(op: LinearOperator) -> Dict[str, Any]:
    if hasattr(op, "describe"):
        return op.describe()
    return {"stage": "opaque", "shape": list(op.shape)}
