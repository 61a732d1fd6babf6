"""Strategies for drawing PSD matrices with Hermitian blocks."""
import logging
from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np

from src.core.events import HermblockEvent, ProjectionConvergedEvent, ProjectionProgressEvent
from src.core.exceptions import ConvergenceError
from src.core.linalg import frobenius, hermitian, random_unitary
from src.core.models import GeneratorConfig
from src.utils.config import Config

logger = logging.getLogger(__name__)

EventCallback = Optional[Callable[[HermblockEvent], None]]


def random_real_psd(rng: np.random.Generator, dim: int) -> np.ndarray:
    """G G^T / dim, symmetrized exactly."""
    g = rng.standard_normal((dim, dim))
    a = g @ g.T / dim
    return (a + a.T) / 2


def random_complex_psd(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> np.ndarray:
    """C C* / rank with C complex Gaussian of shape dim x rank; exactly Hermitian."""
    rank = rank or dim
    c = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    return hermitian(c @ c.conj().T / rank)


def commuting_members(rng: np.random.Generator, alpha: int, n: int) -> tuple:
    """(members S_i = U D_i U*, witness U) with real diagonal D_i."""
    u = random_unitary(rng, n)
    members = [hermitian((u * rng.standard_normal(n)) @ u.conj().T) for _ in range(alpha)]
    return members, u


# --- Block PSD Strategies ---

class BlockGenerationStrategy(ABC):
    """Abstract base class for Hermitian-block PSD generators."""

    @abstractmethod
    def generate(self, cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
        """Return a carrier of side beta*n."""
        pass


class SeparableStrategy(BlockGenerationStrategy):
    """
    H = sum_j A_j (x) B_j with A_j real symmetric PSD and B_j Hermitian PSD.

    Every block is a real combination of the B_j, hence exactly Hermitian.
    """

    def generate(self, cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
        h = np.zeros((cfg.beta * cfg.n, cfg.beta * cfg.n), dtype=complex)
        for _ in range(cfg.k):
            h += np.kron(random_real_psd(rng, cfg.beta), random_complex_psd(rng, cfg.n))
        return h


class GramStrategy(BlockGenerationStrategy):
    """
    Blocks T S_s S_t T from a commuting family S_i and a PSD T.

    H = Z* Z with Z = [S_1 T, ..., S_beta T], so H is PSD; S_s S_t is
    Hermitian because the family commutes.
    """

    def generate(self, cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
        members, _ = commuting_members(rng, cfg.beta, cfg.n)
        t = random_complex_psd(rng, cfg.n)
        n = cfg.n
        h = np.zeros((cfg.beta * n, cfg.beta * n), dtype=complex)
        for s in range(cfg.beta):
            for u in range(s, cfg.beta):
                block = t @ members[s] @ members[u] @ t
                block = (block + block.conj().T) / 2
                h[s * n:(s + 1) * n, u * n:(u + 1) * n] = block
                h[u * n:(u + 1) * n, s * n:(s + 1) * n] = block
        return h


def project_psd(y: np.ndarray) -> np.ndarray:
    w, u = np.linalg.eigh(hermitian(y))
    return hermitian((u * np.clip(w, 0.0, None)) @ u.conj().T)


def project_block_hermitian(y: np.ndarray, beta: int, n: int) -> np.ndarray:
    """Orthogonal projection onto Hermitian matrices whose blocks are Hermitian."""
    out = np.array(y, dtype=complex)
    for s in range(beta):
        for t in range(s, beta):
            a_st = y[s * n:(s + 1) * n, t * n:(t + 1) * n]
            a_ts = y[t * n:(t + 1) * n, s * n:(s + 1) * n]
            block = (a_st + a_st.conj().T + a_ts + a_ts.conj().T) / 4
            out[s * n:(s + 1) * n, t * n:(t + 1) * n] = block
            out[t * n:(t + 1) * n, s * n:(s + 1) * n] = block
    return out


class ProjectedStrategy(BlockGenerationStrategy):
    """Dykstra alternation between the PSD cone and the Hermitian-block subspace."""

    def __init__(self, on_event: EventCallback = None, report_every: int = 500):
        self.on_event = on_event
        self.report_every = report_every

    def _emit(self, event: HermblockEvent) -> None:
        if self.on_event:
            self.on_event(event)

    def generate(self, cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
        dim = cfg.beta * cfg.n
        max_iter = cfg.max_iter or Config.DYKSTRA_MAX_ITER
        tol = Config.DYKSTRA_TOL

        # PSD start, generically off the subspace
        x = random_complex_psd(rng, dim)
        p = np.zeros_like(x)
        q = np.zeros_like(x)
        psd_residual = subspace_residual = float("inf")

        for iteration in range(1, max_iter + 1):
            y = project_psd(x + p)
            p = x + p - y
            x_next = project_block_hermitian(y + q, cfg.beta, cfg.n)
            q = y + q - x_next
            x = x_next

            psd_residual = max(0.0, -float(np.linalg.eigvalsh(x)[0]))
            subspace_residual = frobenius(y - x)
            if iteration % self.report_every == 0:
                self._emit(ProjectionProgressEvent(iteration, psd_residual, subspace_residual))
            if psd_residual <= tol and subspace_residual <= tol:
                logger.debug("dykstra converged after %d iterations", iteration)
                self._emit(ProjectionConvergedEvent(iteration, psd_residual, subspace_residual))
                return x

        raise ConvergenceError(
            f"projection did not converge in {max_iter} iterations "
            f"(psd residual {psd_residual:.3e}, subspace residual {subspace_residual:.3e})",
            {"psd_residual": psd_residual, "subspace_residual": subspace_residual, "iterations": max_iter},
        )
