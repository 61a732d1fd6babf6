"""Randomized search for 2 x 2 block PSD matrices with normal off-diagonal block and ||H|| > ||A+B||."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.blocks import BlockMatrix, partition
from src.core.events import CounterexampleFoundEvent, SearchRestartEvent
from src.core.exceptions import ParameterError
from src.core.linalg import cert_tolerance, hermitian, operator_norm, random_unitary
from src.core.models import GeneratorConfig
from src.generate.generators import STREAM_SEARCH, spawn_rngs
from src.generate.strategies import EventCallback, random_complex_psd
from src.utils.config import Config

logger = logging.getLogger(__name__)

PHASE_STEP = 0.3


@dataclass
class SearchResult:
    evaluated: int
    best_margin: Optional[float] = None
    instance: Optional[BlockMatrix] = None
    found: bool = False


def norm_gap(h: BlockMatrix) -> float:
    """||H||_inf - ||A + B||_inf for a 2 x 2 partition."""
    if h.beta != 2:
        raise ParameterError(f"norm gap needs beta = 2, got {h.beta}")
    a, b = h.diagonal_blocks()
    return operator_norm(h.carrier) - operator_norm(a + b)


def rank_one_control() -> BlockMatrix:
    """x x^T with x = (1, 0, 0, 1): X is not normal and the gap is +1."""
    x = np.array([1.0, 0.0, 0.0, 1.0])
    return partition(np.outer(x, x), 2, 2)


def self_test() -> float:
    """Gap on the rank-one control instance; 1.0 when the evaluator is sound."""
    return norm_gap(rank_one_control())


def _assemble(a: np.ndarray, b: np.ndarray, u: np.ndarray, z: np.ndarray) -> np.ndarray:
    """[[A + cI, X], [X*, B + cI]] with X = U diag(z) U* and c the PSD-restoring shift."""
    x = (u * z) @ u.conj().T
    h = hermitian(np.block([[a, x], [x.conj().T, b]]))
    shift = max(0.0, -float(np.linalg.eigvalsh(h)[0]))
    return h + shift * np.eye(h.shape[0])


def _draw_diagonal(rng: np.random.Generator, n: int, hermitian_only: bool) -> np.ndarray:
    if hermitian_only:
        return rng.standard_normal(n).astype(complex)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _move(rng: np.random.Generator, z: np.ndarray, hermitian_only: bool) -> np.ndarray:
    if hermitian_only:
        return z + PHASE_STEP * rng.standard_normal(len(z))
    return z * np.exp(1j * PHASE_STEP * rng.standard_normal(len(z)))


def search_counterexample_normal_blocks(cfg: GeneratorConfig, on_event: EventCallback = None) -> SearchResult:
    """
    Hill-climb over H = [[A, X], [X*, B]] with X = U diag(z) U* normal.

    Each restart draws A, B, U, z; each step rotates the phases of z (real
    perturbations when ``hermitian_only``) and keeps the move when the gap grows.
    """
    if cfg.beta != 2:
        raise ParameterError(f"counterexample search runs on 2 x 2 partitions, got beta = {cfg.beta}")
    steps = Config.SEARCH_STEPS_PER_RESTART if cfg.steps is None else cfg.steps
    result = SearchResult(evaluated=0)
    if cfg.budget == 0:
        return result

    n = cfg.n
    for restart, rng in enumerate(spawn_rngs(cfg.seed, STREAM_SEARCH, cfg.budget)):
        a = random_complex_psd(rng, n)
        b = random_complex_psd(rng, n)
        u = random_unitary(rng, n)
        z = _draw_diagonal(rng, n, cfg.hermitian_only)

        h = _assemble(a, b, u, z)
        margin = norm_gap(partition(h, 2, n, check_psd=False))
        result.evaluated += 1
        for _ in range(steps):
            z_new = _move(rng, z, cfg.hermitian_only)
            h_new = _assemble(a, b, u, z_new)
            margin_new = norm_gap(partition(h_new, 2, n, check_psd=False))
            result.evaluated += 1
            if margin_new > margin:
                z, h, margin = z_new, h_new, margin_new

        if result.best_margin is None or margin > result.best_margin:
            result.best_margin = margin
            result.instance = partition(h, 2, n, check_psd=False)

        if on_event:
            on_event(SearchRestartEvent(restart, margin, result.best_margin))

        if margin > cert_tolerance(None, h) and not result.found:
            result.found = True
            logger.info("normal-block instance with gap %.3e at restart %d", margin, restart)
            if on_event:
                on_event(CounterexampleFoundEvent(restart, margin))

    return result
