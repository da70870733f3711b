"""Synchronous and asynchronous dynamics of Boolean networks up to isomorphism."""

from .core import (
    BoolNet,
    RandomSource,
    StatePermutation,
    conjugate,
    parse_network,
    random_network,
    random_permutation_network,
    serialize_network,
    transposition,
)
from .dynamics import (
    StateDigraph,
    almost_decreasing_reach,
    asynchronous_graph,
    attractors,
    delta_sets,
    fixed_points,
    image_count,
    periodic_structure,
    synchronous_graph,
)
from .iso import are_isometric_async, are_isomorphic_digraphs, canonical_form, reconstruct_network

__version__ = "0.1.0"

__all__ = [
    "BoolNet",
    "RandomSource",
    "StateDigraph",
    "StatePermutation",
    "almost_decreasing_reach",
    "are_isometric_async",
    "are_isomorphic_digraphs",
    "asynchronous_graph",
    "attractors",
    "canonical_form",
    "conjugate",
    "delta_sets",
    "fixed_points",
    "image_count",
    "parse_network",
    "periodic_structure",
    "random_network",
    "random_permutation_network",
    "reconstruct_network",
    "serialize_network",
    "synchronous_graph",
    "transposition",
]
