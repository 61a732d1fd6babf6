"""Seeded instance generators and the normal-block search."""
from .generators import (
    gen_commuting_family,
    gen_hermitian_block_psd,
    gen_rearrangement_weight,
    gen_separable_real_factor,
    make_rng,
)
from .search import SearchResult, search_counterexample_normal_blocks, self_test

__all__ = [
    "gen_hermitian_block_psd", "gen_commuting_family", "gen_rearrangement_weight",
    "gen_separable_real_factor", "make_rng",
    "SearchResult", "search_counterexample_normal_blocks", "self_test",
]
