"""Thick-end witnesses and hexagonal-grid topological-minor extraction."""

from .graph_core import (
    FiniteGraph,
    HexPrefixSpec,
    LazyGraph,
    ball,
    hex_prefix,
    lazy_from_finite,
    lazy_graph,
    load_edge_list,
    neighbors,
    pair_coords,
    sphere,
    store_edge_list,
    to_dot,
    truncate,
    unpair_id,
)

__all__ = [
    "FiniteGraph",
    "HexPrefixSpec",
    "LazyGraph",
    "ball",
    "hex_prefix",
    "lazy_from_finite",
    "lazy_graph",
    "load_edge_list",
    "neighbors",
    "pair_coords",
    "sphere",
    "store_edge_list",
    "to_dot",
    "truncate",
    "unpair_id",
]

__version__ = "0.1.0"
