"""The three parallel/sequential algorithm pairs on the machine substrate."""

from __future__ import annotations

from ..graphs import Digraph
from .search import SearchInstance, binary_search, parallel_search
from .sorting import (
    SortInstance,
    bubble_sort,
    chain_order,
    oets_sort,
    predecessors_from_table,
)
from .scc import bidirectional_bfs, dcsc, kosaraju

ALGORITHMS = (
    "parallel_search",
    "binary_search",
    "oets",
    "bubble_sort",
    "dcsc",
    "kosaraju",
)

PAIRS = {
    "search": ("binary_search", "parallel_search"),
    "sort": ("bubble_sort", "oets"),
    "scc": ("kosaraju", "dcsc"),
}

_DISPATCH = {
    "parallel_search": parallel_search,
    "binary_search": binary_search,
    "oets": oets_sort,
    "bubble_sort": bubble_sort,
    "dcsc": dcsc,
    "kosaraju": kosaraju,
}


def run(algo_id: str, instance):
    """Run one of the six algorithms; returns (output, trace)."""
    try:
        fn = _DISPATCH[algo_id]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo_id!r}") from None
    return fn(instance)


__all__ = [
    "ALGORITHMS",
    "PAIRS",
    "Digraph",
    "SearchInstance",
    "SortInstance",
    "binary_search",
    "bidirectional_bfs",
    "bubble_sort",
    "chain_order",
    "dcsc",
    "kosaraju",
    "oets_sort",
    "parallel_search",
    "predecessors_from_table",
    "run",
]
