"""Canonical forms under vertex relabeling, by brute force over permutations.

Fine up to n = 8 (40320 permutations); beyond that an external canonical
labeling tool would be needed, which is out of scope at these sizes.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .graph import edge_at, iter_bits, max_edge_count

CANONICAL_MAX_N = 8


@lru_cache(maxsize=16)
def _edge_index_maps(n: int) -> tuple[tuple[int, ...], ...]:
    """For every vertex permutation, the induced colex edge-index permutation."""
    if n > CANONICAL_MAX_N:
        raise ValueError(f"canonicalization supported up to n={CANONICAL_MAX_N}")
    m = max_edge_count(n)
    maps = []
    for perm in permutations(range(n)):
        table = [0] * m
        for i in range(m):
            u, v = edge_at(i)
            pu, pv = perm[u], perm[v]
            if pu > pv:
                pu, pv = pv, pu
            table[i] = pv * (pv - 1) // 2 + pu
        maps.append(tuple(table))
    return tuple(maps)


def _apply_edge_map(bits: int, table: tuple[int, ...]) -> int:
    out = 0
    for i in iter_bits(bits):
        out |= 1 << table[i]
    return out


@lru_cache(maxsize=1 << 18)
def canonical_bits(n: int, bits: int) -> int:
    """Minimum colex bit-string of the graph over all vertex relabelings."""
    best = bits
    for table in _edge_index_maps(n):
        img = _apply_edge_map(bits, table)
        if img < best:
            best = img
    return best


def canonical_system_bits(n: int, graphs: tuple[int, ...]) -> tuple[int, ...]:
    """Minimum tuple of bit-strings under one shared vertex relabeling.

    Graph order is preserved; only vertices are renamed.
    """
    best = graphs
    for table in _edge_index_maps(n):
        img = tuple(_apply_edge_map(bits, table) for bits in graphs)
        if img < best:
            best = img
    return best
