"""Systems of graphs on a shared vertex set and rainbow-triangle machinery.

A rainbow triangle picks its three edges from three distinct graphs of the
system.  Detection walks the triangles of the union graph and asks, per
triangle, whether the three per-edge membership masks admit a system of
distinct representatives; for three sets that is a constant-time Hall check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .graph import Edge, Graph, Triangle, iter_bits, max_edge_count


@dataclass(frozen=True)
class GraphSystem:
    """Ordered tuple of graphs sharing one vertex set."""

    n: int
    graphs: tuple[Graph, ...]

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("a system needs at least one graph")
        for i, g in enumerate(self.graphs):
            if g.n != self.n:
                raise ValueError(f"graph {i} has n={g.n}, system has n={self.n}")

    @classmethod
    def of(cls, *graphs: Graph) -> GraphSystem:
        if not graphs:
            raise ValueError("a system needs at least one graph")
        return cls(n=graphs[0].n, graphs=tuple(graphs))

    @property
    def t(self) -> int:
        return len(self.graphs)

    def union(self) -> Graph:
        rows = [0] * self.n
        for g in self.graphs:
            for v, row in enumerate(g.rows):
                rows[v] |= row
        return Graph(self.n, rows)

    def edge_membership(self, u: int, v: int) -> int:
        """Bitmask of graph indices containing edge (u, v)."""
        mask = 0
        for i, g in enumerate(self.graphs):
            if g.rows[u] >> v & 1:
                mask |= 1 << i
        return mask

    def edge_counts(self) -> tuple[int, ...]:
        return tuple(g.edge_count() for g in self.graphs)

    def total_edges(self) -> int:
        return sum(self.edge_counts())

    def to_json_dict(self, compact: bool = False) -> dict[str, Any]:
        if compact:
            return {"n": self.n, "hex": [g.to_hex() for g in self.graphs]}
        return {
            "n": self.n,
            "graphs": [[[e.u, e.v] for e in g.edges()] for g in self.graphs],
        }

    def to_json(self, compact: bool = False) -> str:
        return json.dumps(self.to_json_dict(compact))


@dataclass(frozen=True)
class RainbowWitness:
    """A triangle plus the strictly increasing graph indices its edges come from.

    edges[j] is the triangle edge assigned to graphs[graph_indices[j]], so the
    three edges are a permutation of the triangle's edge list.
    """

    triangle: Triangle
    graph_indices: tuple[int, int, int]
    edges: tuple[Edge, Edge, Edge]

    def is_valid_for(self, system: GraphSystem) -> bool:
        i1, i2, i3 = self.graph_indices
        if not (0 <= i1 < i2 < i3 < system.t):
            return False
        if sorted(self.edges) != sorted(self.triangle.edges):
            return False
        return all(
            system.graphs[i].has_edge(e.u, e.v)
            for i, e in zip(self.graph_indices, self.edges)
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "triangle": list(self.triangle),
            "graphs": list(self.graph_indices),
            "edges": [[e.u, e.v] for e in self.edges],
        }


def _sdr_possible(m1: int, m2: int, m3: int) -> bool:
    # Hall's condition for three sets of graph indices
    if not (m1 and m2 and m3):
        return False
    if (m1 | m2).bit_count() < 2 or (m1 | m3).bit_count() < 2 or (m2 | m3).bit_count() < 2:
        return False
    return (m1 | m2 | m3).bit_count() >= 3


def _pick_sdr(masks: Sequence[int]) -> tuple[int, ...] | None:
    for i1 in iter_bits(masks[0]):
        for i2 in iter_bits(masks[1] & ~(1 << i1)):
            rest = masks[2] & ~(1 << i1) & ~(1 << i2)
            for i3 in iter_bits(rest):
                return (i1, i2, i3)
    return None


def find_rainbow_triangle(s: GraphSystem) -> RainbowWitness | None:
    """First rainbow triangle in triangle-enumeration order, or None.

    Systems with fewer than three nonempty graphs cannot contain one.
    """
    if s.t < 3:
        return None
    if sum(1 for g in s.graphs if g.edge_count()) < 3:
        return None
    union = s.union()
    for tri in union.triangles():
        tri_edges = tri.edges
        masks = [s.edge_membership(e.u, e.v) for e in tri_edges]
        if not _sdr_possible(*masks):
            continue
        picked = _pick_sdr(masks)
        if picked is None:
            continue
        by_index = sorted(zip(picked, tri_edges))
        return RainbowWitness(
            triangle=tri,
            graph_indices=tuple(i for i, _ in by_index),
            edges=tuple(e for _, e in by_index),
        )
    return None


def is_rbt_free(s: GraphSystem) -> bool:
    return find_rainbow_triangle(s) is None


def triangle_incidence(s: GraphSystem, z: Iterable[int]) -> int:
    """Sum over the three graphs of how many of Z's three edges each contains."""
    _require_t3(s)
    a, b, c = _three_set(s, z)
    return sum(
        s.edge_membership(u, v).bit_count() for u, v in ((a, b), (a, c), (b, c))
    )


def auxiliary_incidence_graph(s: GraphSystem, z: Iterable[int]) -> Graph:
    """Bipartite graph on 3 + 3 vertices: graph index i meets edge j iff G_i holds it.

    Left side 0..2 are graph indices; right side 3..5 are the edges of Z in
    the fixed order (a,b), (a,c), (b,c) for a < b < c.  A perfect matching in
    this graph is exactly a rainbow triangle on Z.
    """
    _require_t3(s)
    a, b, c = _three_set(s, z)
    pairs = ((a, b), (a, c), (b, c))
    rows = [0] * 6
    for j, (u, v) in enumerate(pairs):
        members = s.edge_membership(u, v)
        for i in iter_bits(members):
            rows[i] |= 1 << (3 + j)
            rows[3 + j] |= 1 << i
    return Graph(6, rows)


def _require_t3(s: GraphSystem) -> None:
    if s.t != 3:
        raise ValueError(f"operation requires exactly 3 graphs, system has {s.t}")


def _three_set(s: GraphSystem, z: Iterable[int]) -> tuple[int, int, int]:
    zs = sorted(set(z))
    if len(zs) != 3:
        raise ValueError(f"expected a 3-set of vertices, got {zs}")
    if zs[0] < 0 or zs[-1] >= s.n:
        raise ValueError(f"vertices {zs} out of range for n={s.n}")
    return zs[0], zs[1], zs[2]


def nest_reduce(s: GraphSystem) -> GraphSystem:
    """Rewrite the system into a nested chain G'_1 <= ... <= G'_t.

    Repeatedly replaces the first non-comparable pair (scanning (i, j) with
    i < j after sorting by edge count) by (intersection, union).  Each edge
    keeps its multiplicity across the system, so the total edge count is
    unchanged, and rainbow-freeness survives every replacement.  The sum of
    squared sizes strictly grows each step, which bounds the loop.
    """
    graphs = sorted(s.graphs, key=lambda g: (g.edge_count(), g.to_bits()))
    max_steps = s.t * max_edge_count(s.n) ** 2 + 1
    for _ in range(max_steps):
        swapped = False
        for i in range(len(graphs)):
            for j in range(i + 1, len(graphs)):
                a, b = graphs[i], graphs[j]
                if a.is_subgraph_of(b) or b.is_subgraph_of(a):
                    continue
                graphs[i] = a & b
                graphs[j] = a | b
                graphs.sort(key=lambda g: (g.edge_count(), g.to_bits()))
                swapped = True
                break
            if swapped:
                break
        if not swapped:
            return GraphSystem(n=s.n, graphs=tuple(graphs))
    raise RuntimeError("nesting reduction exceeded its potential bound")


def is_nested(s: GraphSystem) -> bool:
    return all(
        s.graphs[i].is_subgraph_of(s.graphs[i + 1]) for i in range(s.t - 1)
    )


def edge_multiplicities(s: GraphSystem) -> dict[tuple[int, int], int]:
    """Map edge -> number of graphs containing it, over the union's edges."""
    out: dict[tuple[int, int], int] = {}
    for e in s.union().edges():
        out[(e.u, e.v)] = s.edge_membership(e.u, e.v).bit_count()
    return out


# -- serialization ------------------------------------------------------------


def system_from_json_dict(doc: Any) -> GraphSystem:
    """Parse either the edge-list form {"n", "graphs"} or compact {"n", "hex"}."""
    if not isinstance(doc, dict):
        raise ValueError("system document must be a JSON object")
    if "n" not in doc:
        raise ValueError('system document is missing "n"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError('"n" must be an integer')
    if not 1 <= n <= 64:
        raise ValueError(f"n must be in 1..64, got {n}")
    if "graphs" in doc and "hex" in doc:
        raise ValueError('system document has both "graphs" and "hex"')
    if "graphs" in doc:
        entries = doc["graphs"]
        if not isinstance(entries, list) or not entries:
            raise ValueError('"graphs" must be a non-empty list of edge lists')
        graphs = []
        for gi, edge_list in enumerate(entries):
            if not isinstance(edge_list, list):
                raise ValueError(f"graph {gi}: edge list expected")
            pairs = []
            for ei, pair in enumerate(edge_list):
                if (
                    not isinstance(pair, list)
                    or len(pair) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
                ):
                    raise ValueError(f"graph {gi}, edge {ei}: expected [u, v]")
                pairs.append((pair[0], pair[1]))
            try:
                graphs.append(Graph.from_edges(n, pairs))
            except ValueError as exc:
                raise ValueError(f"graph {gi}: {exc}") from None
        return GraphSystem(n=n, graphs=tuple(graphs))
    if "hex" in doc:
        entries = doc["hex"]
        if not isinstance(entries, list) or not entries:
            raise ValueError('"hex" must be a non-empty list of strings')
        graphs = []
        for gi, text in enumerate(entries):
            if not isinstance(text, str):
                raise ValueError(f"hex entry {gi} is not a string")
            try:
                graphs.append(Graph.from_hex(n, text))
            except ValueError as exc:
                raise ValueError(f"graph {gi}: {exc}") from None
        return GraphSystem(n=n, graphs=tuple(graphs))
    raise ValueError('system document needs either "graphs" or "hex"')


def system_from_json(text: str) -> GraphSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return system_from_json_dict(doc)
