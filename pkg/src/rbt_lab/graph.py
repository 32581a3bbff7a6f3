"""Simple graphs on at most 64 labeled vertices, stored as bitmask adjacency rows.

Vertices are dense labels 0..n-1.  A vertex set is a plain int bitmask, so
set algebra is single-word AND/OR/popcount.  Edge serialization order is
colexicographic: index(u, v) = v(v-1)/2 + u for u < v, which is prefix-stable
as n grows.  Graphs are immutable values; edge toggling returns a new graph.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterable, Iterator, NamedTuple

MAX_VERTICES = 64


def max_edge_count(n: int) -> int:
    """Number of possible edges on n vertices, C(n, 2)."""
    return n * (n - 1) // 2


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask with one bit per vertex label."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Edge(NamedTuple):
    u: int
    v: int

    @property
    def index(self) -> int:
        """Colex serialization index, v(v-1)/2 + u."""
        return self.v * (self.v - 1) // 2 + self.u


def edge(u: int, v: int) -> Edge:
    """Normalized edge with u < v; rejects loops and negative labels."""
    if u == v:
        raise ValueError(f"loop edge ({u}, {v}) not allowed")
    if u < 0 or v < 0:
        raise ValueError(f"negative vertex label in ({u}, {v})")
    return Edge(u, v) if u < v else Edge(v, u)


def edge_at(index: int) -> Edge:
    """Inverse of Edge.index."""
    if index < 0:
        raise ValueError("edge index must be nonnegative")
    v = (1 + isqrt(1 + 8 * index)) // 2
    while v * (v - 1) // 2 > index:
        v -= 1
    return Edge(index - v * (v - 1) // 2, v)


class Triangle(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        return (Edge(self.a, self.b), Edge(self.a, self.c), Edge(self.b, self.c))


class Graph:
    """Immutable simple undirected graph; rows[v] is the neighbor bitmask of v."""

    __slots__ = ("n", "rows")

    n: int
    rows: tuple[int, ...]

    def __init__(self, n: int, rows: Iterable[int] | None = None):
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
        self.n = n
        self.rows = tuple(rows) if rows is not None else (0,) * n
        self._validate()

    def _validate(self) -> None:
        n, rows = self.n, self.rows
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..{n - 1}")
            if row >> v & 1:
                raise ValueError(f"vertex {v} adjacent to itself")
        for v, row in enumerate(rows):
            for u in iter_bits(row):
                if not rows[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        seen = set()
        for pair in edges:
            u, v = pair
            e = edge(u, v)
            if e.v >= n:
                raise ValueError(f"edge {tuple(pair)} has vertex >= n={n}")
            if e in seen:
                raise ValueError(f"duplicate edge {tuple(pair)}")
            seen.add(e)
            rows[e.u] |= 1 << e.v
            rows[e.v] |= 1 << e.u
        return cls(n, rows)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, (full ^ (1 << v) for v in range(n)))

    @classmethod
    def complete_bipartite(cls, left: int, right: int) -> Graph:
        """K_{left,right} with part {0..left-1} against {left..left+right-1}."""
        n = left + right
        left_mask = (1 << left) - 1
        right_mask = ((1 << n) - 1) ^ left_mask
        rows = [right_mask] * left + [left_mask] * right
        return cls(n, rows)

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(v, (v + 1) % n) for v in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(v, v + 1) for v in range(n - 1)])

    @classmethod
    def from_bits(cls, n: int, bits: int) -> Graph:
        """Graph from its colex edge-bit integer."""
        m = max_edge_count(n)
        if bits < 0 or bits >> m:
            raise ValueError(f"edge bits out of range for n={n}")
        rows = [0] * n
        for i in iter_bits(bits):
            u, v = edge_at(i)
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def from_hex(cls, n: int, text: str) -> Graph:
        """Parse the compact hex form: colex edge bits packed little-endian."""
        nbytes = (max_edge_count(n) + 7) // 8
        try:
            raw = bytes.fromhex(text)
        except ValueError as exc:
            raise ValueError(f"invalid hex graph {text!r}: {exc}") from None
        if len(raw) != nbytes:
            raise ValueError(
                f"hex graph {text!r} has {len(raw)} bytes, expected {nbytes} for n={n}"
            )
        return cls.from_bits(n, int.from_bytes(raw, "little"))

    # -- queries -----------------------------------------------------------

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, x: int) -> int:
        return self.rows[x].bit_count()

    def neighborhood(self, x: int) -> int:
        """Neighbor bitmask of x (x itself never included)."""
        if not 0 <= x < self.n:
            raise ValueError(f"vertex {x} out of range for n={self.n}")
        return self.rows[x]

    def degree_into(self, x: int, targets: int) -> int:
        """Number of neighbors of x inside the target mask; x in targets is ignored."""
        if not 0 <= x < self.n:
            raise ValueError(f"vertex {x} out of range for n={self.n}")
        return (self.rows[x] & targets).bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def edges(self) -> list[Edge]:
        """All edges in ascending colex order."""
        out = []
        for v in range(self.n):
            below = self.rows[v] & ((1 << v) - 1)
            for u in iter_bits(below):
                out.append(Edge(u, v))
        return out

    def triangles(self) -> list[Triangle]:
        """All vertex triples inducing a triangle, each reported once."""
        out = []
        rows = self.rows
        for b in range(self.n):
            below = rows[b] & ((1 << b) - 1)
            for a in iter_bits(below):
                above = rows[a] & rows[b] & ~((1 << (b + 1)) - 1)
                for c in iter_bits(above):
                    out.append(Triangle(a, b, c))
        return out

    def is_triangle_free(self) -> bool:
        rows = self.rows
        for b in range(self.n):
            below = rows[b] & ((1 << b) - 1)
            for a in iter_bits(below):
                if rows[a] & rows[b] & ~((1 << (b + 1)) - 1):
                    return False
        return True

    # -- algebra and mutation-by-copy ---------------------------------------

    def _require_same_n(self, other: Graph) -> None:
        if self.n != other.n:
            raise ValueError(f"vertex counts differ: {self.n} vs {other.n}")

    def __and__(self, other: Graph) -> Graph:
        self._require_same_n(other)
        return Graph(self.n, (a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: Graph) -> Graph:
        self._require_same_n(other)
        return Graph(self.n, (a | b for a, b in zip(self.rows, other.rows)))

    def is_subgraph_of(self, other: Graph) -> bool:
        self._require_same_n(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def with_edge(self, u: int, v: int) -> Graph:
        e = edge(u, v)
        if e.v >= self.n:
            raise ValueError(f"edge ({u}, {v}) has vertex >= n={self.n}")
        rows = list(self.rows)
        rows[e.u] |= 1 << e.v
        rows[e.v] |= 1 << e.u
        return Graph(self.n, rows)

    def without_edge(self, u: int, v: int) -> Graph:
        e = edge(u, v)
        if e.v >= self.n:
            raise ValueError(f"edge ({u}, {v}) has vertex >= n={self.n}")
        rows = list(self.rows)
        rows[e.u] &= ~(1 << e.v)
        rows[e.v] &= ~(1 << e.u)
        return Graph(self.n, rows)

    def toggle_edge(self, u: int, v: int) -> Graph:
        return self.without_edge(u, v) if self.has_edge(u, v) else self.with_edge(u, v)

    def delete_vertex(self, x: int) -> Graph:
        """Subgraph on the remaining n-1 vertices, labels above x shifted down."""
        if not 0 <= x < self.n:
            raise ValueError(f"vertex {x} out of range for n={self.n}")
        if self.n == 1:
            raise ValueError("cannot delete the only vertex")
        low = (1 << x) - 1
        rows = []
        for v in range(self.n):
            if v == x:
                continue
            row = self.rows[v]
            rows.append((row & low) | ((row >> (x + 1)) << x))
        return Graph(self.n - 1, rows)

    def relabel(self, perm: list[int] | tuple[int, ...]) -> Graph:
        """Image under the vertex permutation v -> perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of 0..n-1")
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            pv = perm[v]
            for u in iter_bits(row):
                rows[pv] |= 1 << perm[u]
        return Graph(self.n, rows)

    # -- serialization -------------------------------------------------------

    def to_bits(self) -> int:
        """Colex edge bits as one integer."""
        # edges (0,v)..(v-1,v) occupy the contiguous colex index range
        # starting at v(v-1)/2, in the same order as row bits 0..v-1
        bits = 0
        for v in range(self.n):
            below = self.rows[v] & ((1 << v) - 1)
            bits |= below << (v * (v - 1) // 2)
        return bits

    def to_hex(self) -> str:
        nbytes = (max_edge_count(self.n) + 7) // 8
        return self.to_bits().to_bytes(nbytes, "little").hex()

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={[tuple(e) for e in self.edges()]})"
