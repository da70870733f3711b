"""Constructions of isomorphic networks with prescribed asynchronous behaviour."""

from .decreasing import (
    DecreasingResult,
    GoodOrder,
    converge_to_fixed_points,
    decreasing_construct,
    decreasing_relabel,
    good_order,
    is_good_order,
    is_x_converging,
)
from .delta import DeltaWitness, break_async_iso
from .many import ManyResult, Packing, many_attractors
from .patterns import Pattern, contains_pattern, get_pattern, pattern_catalog, plug_pattern
from .small import SmallAttractorResult, converge_to_small_attractor, exceptional_fixtures
from .strong import H4Coloring, h4_coloring, strongly_connected_variant

__all__ = [
    "DecreasingResult",
    "DeltaWitness",
    "GoodOrder",
    "H4Coloring",
    "ManyResult",
    "Packing",
    "Pattern",
    "SmallAttractorResult",
    "break_async_iso",
    "contains_pattern",
    "converge_to_fixed_points",
    "converge_to_small_attractor",
    "decreasing_construct",
    "decreasing_relabel",
    "exceptional_fixtures",
    "get_pattern",
    "good_order",
    "h4_coloring",
    "is_good_order",
    "is_x_converging",
    "many_attractors",
    "pattern_catalog",
    "plug_pattern",
    "strongly_connected_variant",
]
