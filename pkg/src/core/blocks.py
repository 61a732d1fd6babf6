"""Partitioned PSD matrices: blocks, partial trace, dyadic padding, direct sums, shuffles."""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg

from src.core.exceptions import ParameterError, ResourceLimitError, ShapeError
from src.core.linalg import Spectrum, frobenius, hermitian, psd_threshold, require_psd, spectrum
from src.utils.config import Config

logger = logging.getLogger(__name__)


def smallest_dyadic(alpha: int) -> int:
    """Smallest power of two >= alpha."""
    if alpha < 1:
        raise ParameterError(f"block count must be >= 1, got {alpha}")
    return 1 << (alpha - 1).bit_length()


def is_dyadic(beta: int) -> bool:
    return beta >= 1 and beta & (beta - 1) == 0


def check_dense_size(dim: int, what: str = "matrix") -> None:
    """Refuse dense materialization beyond the configured cap."""
    cap = Config.max_dense_dim()
    if dim > cap:
        raise ResourceLimitError(
            f"{what} of side {dim} exceeds the dense-size cap {cap} (set HERMBLOCK_MAX_DIM to raise it)",
            {"dim": dim, "cap": cap},
        )


@dataclass(frozen=True)
class BlockMatrix:
    """
    PSD matrix of side beta*n viewed as a beta x beta array of n x n blocks.

    Block (s, t) is 0-based and occupies rows [s*n, (s+1)*n) and columns [t*n, (t+1)*n).
    """
    carrier: np.ndarray
    beta: int
    n: int
    hermitian_blocks: bool
    padded_from: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.beta * self.n

    def block(self, s: int, t: int) -> np.ndarray:
        if not (0 <= s < self.beta and 0 <= t < self.beta):
            raise ShapeError(f"block index ({s}, {t}) outside a {self.beta} x {self.beta} partition")
        n = self.n
        return self.carrier[s * n:(s + 1) * n, t * n:(t + 1) * n]

    def diagonal_blocks(self) -> List[np.ndarray]:
        return [self.block(s, s) for s in range(self.beta)]

    def blocks(self) -> List[List[np.ndarray]]:
        return [[self.block(s, t) for t in range(self.beta)] for s in range(self.beta)]

    def spectrum(self) -> Spectrum:
        return spectrum(self.carrier)


def block_hermitian_defect(carrier: np.ndarray, beta: int, n: int) -> float:
    """max_{s,t} ||A_st - A_st*||_F."""
    defect = 0.0
    for s in range(beta):
        for t in range(s + 1, beta):
            a = carrier[s * n:(s + 1) * n, t * n:(t + 1) * n]
            defect = max(defect, frobenius(a - a.conj().T))
    return defect


def partition(m, beta: int, n: int, tol: Optional[float] = None, check_psd: bool = True) -> BlockMatrix:
    """
    Partition a PSD matrix into beta x beta blocks of side n and validate the
    Hermitian-block hypothesis.

    Args:
        m: square matrix of side beta*n (symmetrized on entry)
        beta: block count per side
        n: block side
        tol: PSD and block-Hermitian tolerance (default Config.TOL_EIG)
        check_psd: raise NotPSDError when the carrier is not PSD

    Returns:
        BlockMatrix
    """
    if beta < 1 or n < 1:
        raise ShapeError(f"partition sizes must be positive, got beta={beta}, n={n}")
    carrier = hermitian(m)
    if carrier.shape[0] != beta * n:
        raise ShapeError(f"matrix of side {carrier.shape[0]} cannot be split into {beta} blocks of side {n}")
    if check_psd:
        require_psd(carrier, tol)

    threshold = psd_threshold(carrier, tol)
    defect = block_hermitian_defect(carrier, beta, n)
    flag = defect <= threshold
    logger.debug("partition beta=%d n=%d block-Hermitian defect %.3e (threshold %.3e)", beta, n, defect, threshold)
    return BlockMatrix(carrier=carrier, beta=beta, n=n, hermitian_blocks=bool(flag))


def assemble(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Reassemble a square grid of equal blocks into one matrix."""
    return np.block([[np.asarray(b, dtype=complex) for b in row] for row in blocks])


def partial_trace(h: BlockMatrix) -> np.ndarray:
    """Delta = sum of the diagonal blocks."""
    delta = np.zeros((h.n, h.n), dtype=complex)
    for a in h.diagonal_blocks():
        delta = delta + a
    return hermitian(delta)


def pad_to_dyadic(h: BlockMatrix) -> BlockMatrix:
    """Append exactly-zero blocks until the block count is a power of two."""
    beta = smallest_dyadic(h.beta)
    if beta == h.beta:
        return h
    side = beta * h.n
    carrier = np.zeros((side, side), dtype=complex)
    carrier[:h.dim, :h.dim] = h.carrier
    logger.info("padded block count %d -> %d", h.beta, beta)
    return BlockMatrix(
        carrier=carrier,
        beta=beta,
        n=h.n,
        hermitian_blocks=h.hermitian_blocks,
        padded_from=h.padded_from or h.beta,
    )


def direct_sum_copies(a, m: int) -> np.ndarray:
    """Block-diagonal matrix with m copies of A."""
    if m < 1:
        raise ParameterError(f"copy count must be >= 1, got {m}")
    a = np.asarray(a, dtype=complex)
    check_dense_size(m * a.shape[0], "direct sum")
    return scipy.linalg.block_diag(*([a] * m))


def eigen_index_map(a, m: int, j: int) -> tuple:
    """(lambda_{1+j}(direct sum of m copies of A), lambda_{ceil((1+j)/m)}(A))."""
    if j < 0:
        raise ParameterError(f"index j must be >= 0, got {j}")
    a = hermitian(a)
    require_psd(a)
    left = spectrum(direct_sum_copies(a, m))
    right = spectrum(a)
    return left.at(1 + j), right.at(math.ceil((1 + j) / m))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; block (s, t) equals a_st * B."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    check_dense_size(max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), "tensor product")
    return np.kron(a, b)


@dataclass(frozen=True)
class Permutation:
    """Index bijection; as a matrix P[image[i], i] = 1, so (P x)[image[i]] = x[i]."""
    image: np.ndarray
    size: int = field(init=False)

    def __post_init__(self):
        image = np.asarray(self.image, dtype=np.int64)
        if image.ndim != 1 or not np.array_equal(np.sort(image), np.arange(len(image))):
            raise ParameterError("permutation image must be a bijection on {0, ..., size-1}")
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "size", len(image))

    @property
    def shape(self) -> tuple:
        return (self.size, self.size)

    def matrix(self) -> np.ndarray:
        p = np.zeros((self.size, self.size))
        p[self.image, np.arange(self.size)] = 1.0
        return p

    def apply(self, x: np.ndarray) -> np.ndarray:
        """P x for a vector or for the rows of a matrix."""
        out = np.empty_like(x)
        out[self.image] = x
        return out

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        return y[self.image]

    def conjugate(self, g: np.ndarray) -> np.ndarray:
        """P G P^T by index relabeling."""
        out = np.empty_like(g)
        out[np.ix_(self.image, self.image)] = g
        return out

    def inverse(self) -> "Permutation":
        return Permutation(np.argsort(self.image))


def shuffle_permutation(m: int, beta: int, n: int) -> Permutation:
    """
    Block-major (s, c, i) to copy-major (c, s, i) relabeling.

    With G the matrix whose (s, t) block is I_m (x) A_st, P G P^T is the direct
    sum of m copies of H.
    """
    if m < 1 or beta < 1 or n < 1:
        raise ParameterError(f"shuffle sizes must be positive, got m={m}, beta={beta}, n={n}")
    s, c, i = np.meshgrid(np.arange(beta), np.arange(m), np.arange(n), indexing="ij")
    image = (c * beta * n + s * n + i).reshape(-1)
    return Permutation(image)
