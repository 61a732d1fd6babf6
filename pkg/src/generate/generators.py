"""Seeded generators for block PSD matrices, commuting families and separable states."""
import logging
from typing import List

import numpy as np

from src.certify.rearrangement import CommutingFamily
from src.certify.separability import SeparableState
from src.core.blocks import BlockMatrix, partition
from src.core.exceptions import DecompositionError, ParameterError
from src.core.models import GeneratorConfig, GeneratorMethod
from src.generate.strategies import (
    BlockGenerationStrategy,
    EventCallback,
    GramStrategy,
    ProjectedStrategy,
    SeparableStrategy,
    commuting_members,
    random_complex_psd,
    random_real_psd,
)

logger = logging.getLogger(__name__)

# Stream indices; each component draws from its own child of the seed.
STREAM_MATRIX = 0
STREAM_FAMILY = 1
STREAM_TERMS = 2
STREAM_SEARCH = 3


def make_rng(seed: int, stream: int = STREAM_MATRIX) -> np.random.Generator:
    """PCG64 generator on child ``stream`` of SeedSequence(seed)."""
    child = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(child))


def spawn_rngs(seed: int, stream: int, count: int) -> List[np.random.Generator]:
    """Independent generators for ``count`` parallel units of one component."""
    children = np.random.SeedSequence(seed, spawn_key=(stream,)).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def block_strategy(method: GeneratorMethod, on_event: EventCallback = None) -> BlockGenerationStrategy:
    if method is GeneratorMethod.SEPARABLE:
        return SeparableStrategy()
    if method is GeneratorMethod.GRAM:
        return GramStrategy()
    if method is GeneratorMethod.PROJECTED:
        return ProjectedStrategy(on_event=on_event)
    raise ParameterError(f"method '{method.value}' does not produce a block matrix")


def gen_hermitian_block_psd(cfg: GeneratorConfig, on_event: EventCallback = None) -> BlockMatrix:
    """
    Draw a PSD matrix of side beta*n with Hermitian blocks.

    Args:
        cfg: seed, beta, n, method (separable, gram or projected) and method extras
        on_event: receives projection progress events

    Returns:
        BlockMatrix with hermitian_blocks set
    """
    strategy = block_strategy(cfg.method, on_event)
    carrier = strategy.generate(cfg, make_rng(cfg.seed, STREAM_MATRIX))
    h = partition(carrier, cfg.beta, cfg.n)
    if not h.hermitian_blocks:
        raise DecompositionError(f"{cfg.method.value} generator produced non-Hermitian blocks")
    logger.debug("generated %s instance beta=%d n=%d seed=%d", cfg.method.value, cfg.beta, cfg.n, cfg.seed)
    return h


def gen_commuting_family(cfg: GeneratorConfig) -> CommutingFamily:
    """alpha = cfg.beta members S_i = U D_i U* sharing one random unitary basis."""
    members, basis = commuting_members(make_rng(cfg.seed, STREAM_FAMILY), cfg.beta, cfg.n)
    return CommutingFamily(members=members, witness_basis=basis)


def gen_rearrangement_weight(cfg: GeneratorConfig) -> np.ndarray:
    """Random PSD T of side n paired with a generated family."""
    return random_complex_psd(make_rng(cfg.seed, STREAM_MATRIX), cfg.n)


def gen_separable_real_factor(cfg: GeneratorConfig) -> SeparableState:
    """k terms A_j (x) B_j with A_j real symmetric PSD of side n_H = beta and B_j of side n_F = n."""
    rng = make_rng(cfg.seed, STREAM_TERMS)
    terms = [(random_real_psd(rng, cfg.beta), random_complex_psd(rng, cfg.n)) for _ in range(cfg.k)]
    state = SeparableState(terms)
    return state.normalize() if cfg.normalize else state
