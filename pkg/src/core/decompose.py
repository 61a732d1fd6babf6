"""
Isometric decompositions of PSD block matrices.

Three constructions are provided:

* ``pinch_decompose``: H = sum_s V_s A_ss V_s* for any partition.
* ``two_block_hermitian_decompose``: H = (1/2) sum_k V_k (A+B) V_k* for 2 x 2
  Hermitian blocks.
* ``clifford_decompose``: the direct sum of m = 2^beta copies of H equals
  (1/beta) sum_k V_k (copies of Delta) V_k* for a dyadic number beta of
  Hermitian blocks.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator

from src.core.blocks import (
    BlockMatrix,
    Permutation,
    check_dense_size,
    is_dyadic,
    partial_trace,
    partition,
    shuffle_permutation,
)
from src.core.exceptions import DecompositionError, NonHermitianBlocksError, ParameterError, ResourceLimitError
from src.core.linalg import frobenius, hermitian, isometry_defect, polar_isometry_factor, psd_sqrt, psd_threshold, require_psd
from src.core.structured import (
    BlockDiagonalStage,
    KroneckerStage,
    PermutationStage,
    StructuredOperator,
    SumOperator,
    to_dense,
)
from src.utils.config import Config

logger = logging.getLogger(__name__)

Operator = Union[np.ndarray, LinearOperator]

_FLIP = np.array([[0, 1], [1, 0]], dtype=np.int64)
_SIGN = np.array([[1, 0], [0, -1]], dtype=np.int64)


@dataclass
class WeightedIsometryDecomposition:
    """
    target = weight * sum_k V_k summand V_k*, or sum_k V_k per_summand[k] V_k*
    when per-summand cores are given (pinch case, weight 1).
    """
    kind: str
    target_dim: int
    weight: float
    isometries: List[Operator]
    summand: Optional[Operator] = None
    per_summand: Optional[List[np.ndarray]] = None
    beta: int = 1
    n: int = 1
    m: int = 1

    @property
    def materialized(self) -> bool:
        return all(isinstance(v, np.ndarray) for v in self.isometries)

    def core(self, k: int) -> Operator:
        return self.per_summand[k] if self.per_summand is not None else self.summand

    def reconstruct(self) -> np.ndarray:
        check_dense_size(self.target_dim, "reconstruction")
        total = np.zeros((self.target_dim, self.target_dim), dtype=complex)
        for k, v in enumerate(self.isometries):
            v = to_dense(v)
            total += v @ to_dense(self.core(k)) @ v.conj().T
        return self.weight * total

    def residual(self, target: np.ndarray) -> float:
        return frobenius(target - self.reconstruct())

    def isometry_defects(self, probes: int = 20, seed: int = 0) -> List[float]:
        """||V*V - I||_F for dense isometries; a matvec-only probe estimate for lazy ones."""
        if self.materialized:
            return [isometry_defect(v) for v in self.isometries]
        return [probe_isometry_defect(v, probes=probes, seed=seed) for v in self.isometries]


def probe_isometry_defect(v: LinearOperator, probes: int = 20, seed: int = 0) -> float:
    """max over random x of ||V*V x - x|| / ||x||, using only matvec and rmatvec."""
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for _ in range(probes):
        x = rng.standard_normal(v.shape[1]) + 1j * rng.standard_normal(v.shape[1])
        worst = max(worst, float(np.linalg.norm(v.rmatvec(v.matvec(x)) - x) / np.linalg.norm(x)))
    return worst


# --- Pinch ---

def pinch_decompose(h: BlockMatrix) -> WeightedIsometryDecomposition:
    """
    H = sum_s V_s A_ss V_s* built from the block columns of H^{1/2}.

    The s-th block column C_s of S = H^{1/2} satisfies C_s* C_s = A_ss, so its polar
    factor V_s carries A_ss back into H. No Hermitian-block hypothesis is needed.
    """
    s_root = psd_sqrt(h.carrier)
    isometries = []
    for s in range(h.beta):
        column = s_root[:, s * h.n:(s + 1) * h.n]
        v, _ = polar_isometry_factor(column)
        isometries.append(v)
    logger.debug("pinch decomposition of %d blocks of side %d", h.beta, h.n)
    return WeightedIsometryDecomposition(
        kind="pinch",
        target_dim=h.dim,
        weight=1.0,
        isometries=isometries,
        per_summand=[a.copy() for a in h.diagonal_blocks()],
        beta=h.beta,
        n=h.n,
    )


# --- Two Hermitian blocks ---

def two_block_unitary(n: int) -> np.ndarray:
    """(1/sqrt 2) [[I, iI], [iI, I]]."""
    eye = np.eye(n)
    return np.block([[eye, 1j * eye], [1j * eye, eye]]) / math.sqrt(2.0)


def two_block_hermitian_decompose(h: BlockMatrix) -> WeightedIsometryDecomposition:
    """
    H = [[A, X], [X, B]] with X Hermitian as (1/2) sum_k V_k (A+B) V_k*.

    The congruence by U = (1/sqrt 2)[[I, iI], [iI, I]] turns H into
    (1/2)[[A+B, Y], [Y*, A+B]] with Y = 2X + i(B-A); pinching that matrix and
    undoing U gives isometries that are in general complex.
    """
    if h.beta != 2:
        raise ParameterError(f"two-block decomposition needs beta = 2, got {h.beta}")
    if not h.hermitian_blocks:
        raise NonHermitianBlocksError("off-diagonal block X is not Hermitian")
    u = two_block_unitary(h.n)
    rotated = partition(u @ h.carrier @ u.conj().T, 2, h.n)
    inner = pinch_decompose(rotated)
    a, b = h.diagonal_blocks()
    return WeightedIsometryDecomposition(
        kind="two-block",
        target_dim=h.dim,
        weight=0.5,
        isometries=[u.conj().T @ w for w in inner.isometries],
        summand=hermitian(a + b),
        beta=2,
        n=h.n,
    )


# --- Clifford construction ---

def clifford_generator(j: int, beta: int) -> np.ndarray:
    """Q_j = Z^{(x) j-1} (x) F (x) I_2^{(x) beta-j} as an integer matrix."""
    if not 1 <= j <= beta:
        raise ParameterError(f"generator index must satisfy 1 <= j <= beta = {beta}, got {j}")
    q = np.ones((1, 1), dtype=np.int64)
    for factor in clifford_factors(j, beta):
        q = np.kron(q, np.eye(factor, dtype=np.int64) if isinstance(factor, int) else factor)
    return q


def clifford_factors(j: int, beta: int) -> list:
    """Kronecker factors of Q_j; an int stands for an identity block."""
    factors = [_SIGN] * (j - 1) + [_FLIP]
    if beta > j:
        factors.append(2 ** (beta - j))
    return factors


def clifford_W(beta: int, n: int) -> StructuredOperator:
    """W = direct sum over j of Q_j (x) I_n; Hermitian with W^2 = I."""
    if beta < 2:
        raise ParameterError(f"clifford_W needs beta >= 2, got {beta}")
    blocks = [KroneckerStage(clifford_factors(j, beta) + [n]) for j in range(1, beta + 1)]
    return StructuredOperator([BlockDiagonalStage(blocks)])


def hadamard_reflection(p: int) -> np.ndarray:
    """J_p = J_1^{(x) p} with J_1 = (1/sqrt 2)[[1, 1], [1, -1]]."""
    if p < 1:
        raise ParameterError(f"reflection order must be >= 1, got {p}")
    j1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    out = np.ones((1, 1))
    for _ in range(p):
        out = np.kron(out, j1)
    return out


def _check_clifford_input(h: BlockMatrix) -> None:
    if not is_dyadic(h.beta) or h.beta < 2:
        raise ParameterError(
            f"block count {h.beta} is not a power of two >= 2; pad with pad_to_dyadic (CLI: --pad) first"
        )
    if not h.hermitian_blocks:
        raise NonHermitianBlocksError("blocks A_st are not Hermitian")
    if h.beta > Config.MAX_STRUCTURED_BETA:
        raise ResourceLimitError(
            f"beta = {h.beta} needs 2^{h.beta} direct-sum copies; the limit is beta <= {Config.MAX_STRUCTURED_BETA}",
            {"beta": h.beta},
        )


def _check_materializable(h: BlockMatrix) -> None:
    m = 2 ** h.beta
    if h.beta > Config.MAX_MATERIALIZED_BETA:
        raise ResourceLimitError(
            f"beta = {h.beta} is above the materialized limit {Config.MAX_MATERIALIZED_BETA}; use the structured path",
            {"beta": h.beta},
        )
    check_dense_size(m * h.beta * h.n, "Clifford pipeline matrix")


def copy_sum_matrix(h: BlockMatrix) -> np.ndarray:
    """G with blocks G_st = I_m (x) A_st, m = 2^beta."""
    m = 2 ** h.beta
    eye = np.eye(m)
    return np.block([[np.kron(eye, h.block(s, t)) for t in range(h.beta)] for s in range(h.beta)])


def omega(h: BlockMatrix) -> np.ndarray:
    """Omega = W G W*; block (s, t) equals (Q_s Q_t) (x) A_st."""
    _check_clifford_input(h)
    _check_materializable(h)
    w = clifford_W(h.beta, h.n).to_dense()
    return hermitian(w @ copy_sum_matrix(h) @ w.conj().T)


@dataclass
class CliffordIntermediates:
    """Every matrix produced along the materialized Clifford pipeline."""
    beta: int
    n: int
    m: int
    generators: List[np.ndarray]
    W: StructuredOperator
    G: np.ndarray
    omega: np.ndarray
    J: np.ndarray
    R: np.ndarray
    rotated: np.ndarray
    D: np.ndarray
    shuffle: Permutation
    pinch: WeightedIsometryDecomposition
    diagonal_defect: float = 0.0
    padded_from: Optional[int] = field(default=None)


def clifford_intermediates(h: BlockMatrix) -> CliffordIntermediates:
    """
    Run the dense pipeline: Omega = W G W*, rotate by R = J_p (x) I_{mn}, check the
    diagonal blocks against D = (1/beta)(copies of Delta), pinch the rotated matrix.
    """
    _check_clifford_input(h)
    _check_materializable(h)
    beta, n = h.beta, h.n
    m = 2 ** beta
    p = beta.bit_length() - 1

    generators = [clifford_generator(j, beta) for j in range(1, beta + 1)]
    w_op = clifford_W(beta, n)
    w = w_op.to_dense()
    g = copy_sum_matrix(h)
    om = hermitian(w @ g @ w.conj().T)
    j_p = hadamard_reflection(p)
    r = np.kron(j_p, np.eye(m * n))
    rotated = hermitian(r @ om @ r.conj().T)

    delta = partial_trace(h)
    d = np.kron(np.eye(m), delta) / beta
    side = m * n
    defect = max(
        frobenius(rotated[k * side:(k + 1) * side, k * side:(k + 1) * side] - d) for k in range(beta)
    )
    threshold = psd_threshold(h.carrier)
    if defect > threshold:
        raise DecompositionError(
            f"diagonal blocks of the rotated matrix differ from D by {defect:.3e} (threshold {threshold:.3e})",
            {"defect": defect, "threshold": threshold},
        )

    pinch = pinch_decompose(partition(rotated, beta, side))
    logger.info("clifford pipeline beta=%d n=%d m=%d side=%d", beta, n, m, beta * side)
    return CliffordIntermediates(
        beta=beta,
        n=n,
        m=m,
        generators=generators,
        W=w_op,
        G=g,
        omega=om,
        J=j_p,
        R=r,
        rotated=rotated,
        D=d,
        shuffle=shuffle_permutation(m, beta, n),
        pinch=pinch,
        diagonal_defect=defect,
        padded_from=h.padded_from,
    )


def structured_isometries(
    sqrt_h: np.ndarray, delta: np.ndarray, beta: int, n: int
) -> List[Union[StructuredOperator, SumOperator]]:
    """
    V_k = (I_m (x) H^{1/2}) P W R E_k D^{+1/2} + I_m (x) e_k (x) Pi_ker as lazy operators.

    E_k injects block k of side mn and D^{+1/2} = sqrt(beta) I_m (x) Delta^{+1/2} uses the
    pseudo-inverse square root on range(Delta). For x in ker(Delta) every A_ss x = 0, so
    e_c (x) e_s (x) x lies in the kernel of the direct sum of copies of H; the second term
    sends e_c (x) x there and completes V_k to an isometry. It is omitted when Delta > 0.
    """
    m = 2 ** beta
    p = beta.bit_length() - 1
    spec, u = require_psd(delta)
    values = np.asarray(spec.values, dtype=float)
    top = float(values[0]) if len(values) else 0.0
    keep = values > Config.RANK_RTOL * top if top > 0.0 else np.zeros(len(values), dtype=bool)
    u_range, u_kernel = u[:, keep], u[:, ~keep]
    pinv_sqrt = hermitian((u_range / np.sqrt(values[keep])) @ u_range.conj().T) * math.sqrt(beta)
    kernel_projector = hermitian(u_kernel @ u_kernel.conj().T) if u_kernel.shape[1] else None
    if kernel_projector is not None:
        logger.debug("partial trace has a %d-dimensional kernel; completing the isometries", u_kernel.shape[1])

    root = KroneckerStage([m, sqrt_h])
    shuffle = PermutationStage(shuffle_permutation(m, beta, n))
    w = clifford_W(beta, n).stages[0]
    j1 = hadamard_reflection(1)
    r = KroneckerStage([j1] * p + [m * n])
    scale = KroneckerStage([m, pinv_sqrt])

    isometries: List[Union[StructuredOperator, SumOperator]] = []
    for k in range(beta):
        e_k = np.zeros((beta, 1))
        e_k[k, 0] = 1.0
        inject = KroneckerStage([e_k, m * n])
        v_k = StructuredOperator([root, shuffle, w, r, inject, scale])
        if kernel_projector is not None:
            v_k = SumOperator([v_k, KroneckerStage([m, e_k, kernel_projector])])
        isometries.append(v_k)
    return isometries


def clifford_decompose(h: BlockMatrix, materialize: bool = True) -> WeightedIsometryDecomposition:
    """
    Direct sum of m = 2^beta copies of H as (1/beta) sum_k V_k (copies of Delta) V_k*.

    Args:
        h: Hermitian-block PSD matrix with dyadic beta >= 2
        materialize: dense isometries (beta <= 4) or lazy StructuredOperators (beta <= 8)

    Returns:
        WeightedIsometryDecomposition with beta isometries of shape (m beta n, m n)
    """
    _check_clifford_input(h)
    beta, n = h.beta, h.n
    m = 2 ** beta
    delta = partial_trace(h)

    if materialize:
        inter = clifford_intermediates(h)
        # Omega = R* M R, G = W Omega W and P G P^T is the direct sum of copies of H
        w = inter.W.to_dense()
        back = inter.shuffle.apply(w @ inter.R.conj().T)
        isometries = [back @ u for u in inter.pinch.isometries]
        summand: Operator = np.kron(np.eye(m), delta)
    else:
        isometries = structured_isometries(psd_sqrt(h.carrier), delta, beta, n)
        summand = KroneckerStage([m, delta])

    return WeightedIsometryDecomposition(
        kind="clifford",
        target_dim=m * beta * n,
        weight=1.0 / beta,
        isometries=isometries,
        summand=summand,
        beta=beta,
        n=n,
        m=m,
    )


def probe_residual(
    h: BlockMatrix,
    decomposition: WeightedIsometryDecomposition,
    probes: int = 20,
    seed: int = 0,
) -> float:
    """
    max over random v of |v*(copies of H)v - w sum_k v*V_k (copies of Delta) V_k* v| / ||v||^2.

    Only matrix-vector products are used, so this works for structured isometries.
    """
    target = KroneckerStage([decomposition.m, h.carrier])
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for _ in range(probes):
        v = rng.standard_normal(decomposition.target_dim) + 1j * rng.standard_normal(decomposition.target_dim)
        lhs = np.vdot(v, target.matvec(v)).real
        rhs = 0.0
        for k, iso in enumerate(decomposition.isometries):
            c = iso.conj().T @ v if isinstance(iso, np.ndarray) else iso.rmatvec(v)
            core = decomposition.core(k)
            rhs += np.vdot(c, core @ c if isinstance(core, np.ndarray) else core.matvec(c)).real
        rhs *= decomposition.weight
        worst = max(worst, abs(lhs - rhs) / float(np.vdot(v, v).real))
    return worst
