"""Dense complex matrix kernels: spectra, square roots, polar factors, norms, matrix functions."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from src.core.exceptions import ConvergenceError, NotPSDError, ParameterError, ShapeError
from src.core.models import CertificateReport, ConcaveFunctionSpec, make_item
from src.utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Spectrum:
    """Descending real eigenvalues of a Hermitian matrix.

    Indices passed to :meth:`at` are 1-based, as in the inequalities being
    certified. For PSD sources lambda_j = 0 whenever j exceeds the dimension.
    """
    values: np.ndarray
    psd: bool = False

    def __len__(self) -> int:
        return len(self.values)

    def at(self, j: int) -> float:
        if j < 1:
            raise ParameterError(f"eigenvalue index must be >= 1, got {j}")
        if j > len(self.values):
            if not self.psd:
                raise ParameterError(f"index {j} past dimension {len(self.values)} of a non-PSD source")
            return 0.0
        return float(self.values[j - 1])

    def padded(self, length: int) -> np.ndarray:
        """Values extended with zeros (PSD convention) up to ``length``."""
        if length <= len(self.values):
            return self.values[:length].copy()
        if not self.psd:
            raise ParameterError("zero padding requires a PSD source")
        return np.concatenate([self.values, np.zeros(length - len(self.values))])

    def prefix_sums(self, length: Optional[int] = None) -> np.ndarray:
        return np.cumsum(self.padded(length or len(self.values)))


def as_matrix(a) -> np.ndarray:
    """Complex 2-D copy with finiteness check."""
    a = np.array(a, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParameterError("matrix entries must be finite")
    return a


def hermitian(a) -> np.ndarray:
    """Canonical symmetrization (A + A*) / 2 of a square matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Hermitian matrix must be square, got {a.shape}")
    return (a + a.conj().T) / 2


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def psd_threshold(a: np.ndarray, tol: Optional[float] = None) -> float:
    """Admissible negative eigenvalue magnitude: tol_eig * (1 + ||A||_F)."""
    tol = Config.TOL_EIG if tol is None else tol
    return tol * (1.0 + frobenius(a))


def cert_tolerance(tol: Optional[float], *matrices: np.ndarray) -> float:
    """Absolute certificate tolerance after normalizing inputs to operator norm <= 1."""
    tol = Config.TOL_CERT if tol is None else tol
    scale = max([1.0] + [operator_norm(m) for m in matrices])
    return tol * scale


# --- Eigensolvers ---

def _jacobi_eigh(a: np.ndarray, max_sweeps: int, off_rtol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi; returns (eigenvalues, eigenvectors) unsorted."""
    a = a.copy()
    dim = a.shape[0]
    v = np.eye(dim, dtype=complex)
    threshold = off_rtol * frobenius(a)

    def off_norm(m: np.ndarray) -> float:
        return float(np.sqrt(max(frobenius(m) ** 2 - np.sum(np.abs(np.diag(m)) ** 2), 0.0)))

    for sweep in range(max_sweeps):
        off = off_norm(a)
        if off <= threshold:
            logger.debug("jacobi converged after %d sweeps (off=%.3e)", sweep, off)
            return np.real(np.diag(a)).copy(), v
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                phase = apq / magnitude
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation composed with the phase that makes a[p, q] real
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g

    off = off_norm(a)
    if off <= threshold:
        return np.real(np.diag(a)).copy(), v
    raise ConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal residual {off:.3e})",
        {"residual": off, "sweeps": max_sweeps},
    )


def hermitian_eig(a, method: Optional[str] = None) -> Tuple[Spectrum, np.ndarray]:
    """
    Eigendecomposition A = U diag(lambda) U* with lambda descending.

    Args:
        a: Hermitian matrix (symmetrized on entry)
        method: "lapack" or "jacobi" (default: Config.EIG_METHOD)

    Returns:
        (Spectrum, unitary U)
    """
    a = hermitian(a)
    method = method or Config.EIG_METHOD
    if method == "lapack":
        w, u = np.linalg.eigh(a)
    elif method == "jacobi":
        w, u = _jacobi_eigh(a, Config.JACOBI_MAX_SWEEPS, Config.JACOBI_OFF_RTOL)
    else:
        raise ParameterError(f"unknown eigensolver '{method}'")
    order = np.argsort(-w, kind="stable")
    w, u = w[order], u[:, order]
    psd = bool(len(w) == 0 or w[-1] >= -psd_threshold(a))
    return Spectrum(values=w, psd=psd), u


def spectrum(a) -> Spectrum:
    """Descending eigenvalues only."""
    a = hermitian(a)
    w = np.linalg.eigvalsh(a)[::-1].copy()
    psd = bool(len(w) == 0 or w[-1] >= -psd_threshold(a))
    return Spectrum(values=w, psd=psd)


def require_psd(a, tol: Optional[float] = None) -> Tuple[Spectrum, np.ndarray]:
    """Eigendecomposition of a PSD matrix with clamping of roundoff negatives."""
    a = hermitian(a)
    spec, u = hermitian_eig(a)
    threshold = psd_threshold(a, tol)
    lambda_min = float(spec.values[-1]) if len(spec) else 0.0
    if lambda_min < -threshold:
        raise NotPSDError(lambda_min, threshold)
    clamped = np.where(spec.values < 0.0, 0.0, spec.values)
    return Spectrum(values=clamped, psd=True), u


def is_psd(a, tol: Optional[float] = None) -> bool:
    try:
        require_psd(a, tol)
    except NotPSDError:
        return False
    return True


def psd_sqrt(a, tol: Optional[float] = None) -> np.ndarray:
    """PSD square root; eigenvalues within tolerance below zero are clamped."""
    spec, u = require_psd(a, tol)
    return hermitian((u * np.sqrt(spec.values)) @ u.conj().T)


def matrix_function(a, f: ConcaveFunctionSpec, tol: Optional[float] = None) -> np.ndarray:
    """Spectral calculus U f(diag lambda) U* for a PSD matrix and a catalog function."""
    if not isinstance(f, ConcaveFunctionSpec):
        raise ParameterError(f"function must be a catalog ConcaveFunctionSpec, got {type(f).__name__}")
    spec, u = require_psd(a, tol)
    return hermitian((u * f(spec.values)) @ u.conj().T)


def trace_function(a, f: ConcaveFunctionSpec, tol: Optional[float] = None) -> float:
    """Tr f(A) as a sum over eigenvalues."""
    spec, _ = require_psd(a, tol)
    return float(np.sum(f(spec.values)))


# --- Isometries ---

def isometry_defect(v: np.ndarray) -> float:
    """||V*V - I_q||_F."""
    q = v.shape[1]
    return frobenius(v.conj().T @ v - np.eye(q))


def is_isometry(v: np.ndarray, tol: Optional[float] = None) -> bool:
    tol = Config.TOL_ISO if tol is None else tol
    return v.shape[0] >= v.shape[1] and isometry_defect(v) <= tol * np.sqrt(v.shape[1])


def polar_isometry_factor(c, rank_rtol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polar factorization C = V P of a tall matrix with V*V = I_q.

    Directions where C is rank deficient are completed by orthonormalizing the
    residual coordinate vectors of the orthogonal complement of range(C).

    Args:
        c: p x q matrix, p >= q
        rank_rtol: singular values <= rank_rtol * sigma_max count as zero

    Returns:
        (isometry V, PSD factor P = (C*C)^{1/2})
    """
    c = as_matrix(c)
    p, q = c.shape
    if p < q:
        raise ShapeError(f"polar isometry factor needs p >= q, got {p} x {q}")
    rank_rtol = Config.RANK_RTOL if rank_rtol is None else rank_rtol

    u, s, wh = np.linalg.svd(c, full_matrices=False)
    sigma_max = s[0] if len(s) else 0.0
    rank = int(np.sum(s > rank_rtol * sigma_max)) if sigma_max > 0.0 else 0

    if rank < q:
        kept = u[:, :rank]
        residual = np.eye(p, dtype=complex) - kept @ kept.conj().T
        complement = scipy.linalg.orth(residual)
        u = np.hstack([kept, complement[:, : q - rank]])
        logger.debug("polar factor completed %d null direction(s)", q - rank)

    v = u @ wh
    pos = hermitian((wh.conj().T * s) @ wh)
    return v, pos


# --- Norms ---

def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def operator_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(singular_values(a)[0])


def schatten_norm(a, p: float) -> float:
    """(sum sigma_i^p)^(1/p); p = inf gives the operator norm."""
    p = float(p)
    if not p >= 1.0:
        raise ParameterError(f"Schatten exponent must satisfy p >= 1, got {p}")
    sigma = singular_values(a)
    if np.isinf(p):
        return float(sigma[0]) if len(sigma) else 0.0
    if len(sigma) == 0 or sigma[0] == 0.0:
        return 0.0
    # scale to avoid overflow for large p
    top = sigma[0]
    return float(top * np.sum((sigma / top) ** p) ** (1.0 / p))


def ky_fan_norm(a, k: int) -> float:
    """Sum of the k largest singular values."""
    a = as_matrix(a)
    if not 1 <= k <= min(a.shape):
        raise ParameterError(f"Ky Fan index k must satisfy 1 <= k <= {min(a.shape)}, got {k}")
    return float(np.sum(singular_values(a)[:k]))


# --- Weyl ---

def weyl_bound(y, z, r: int, s: int, tol: Optional[float] = None) -> CertificateReport:
    """lambda_{r+s+1}(Y+Z) <= lambda_{r+1}(Y) + lambda_{s+1}(Z)."""
    y, z = hermitian(y), hermitian(z)
    if y.shape != z.shape:
        raise ShapeError(f"dimension mismatch {y.shape} vs {z.shape}")
    if r < 0 or s < 0:
        raise ParameterError("Weyl indices r, s must be nonnegative")
    lhs = spectrum(y + z).at(r + s + 1)
    rhs = spectrum(y).at(r + 1) + spectrum(z).at(s + 1)
    item = make_item(f"lambda_{r + s + 1}(Y+Z) <= lambda_{r + 1}(Y) + lambda_{s + 1}(Z)", lhs, rhs)
    return CertificateReport.build(
        "weyl",
        [item],
        cert_tolerance(tol, y, z),
        context={"dim": y.shape[0], "r": r, "s": s},
    )


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-like unitary: QR of a complex Gaussian matrix with phase correction."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.where(np.abs(d) == 0.0, 1.0, np.abs(d)))
