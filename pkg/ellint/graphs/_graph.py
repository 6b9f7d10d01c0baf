"""
Decorated directed multigraphs.

A decorated graph has an ordered vertex set and an ordered list of edges. Every
edge has a head, a tail and a non-negative decoration ``n``, the number of extra
holomorphic derivatives applied to the propagator on that edge. Edges are
addressed by their index so that parallel edges stay distinguishable.
"""
import logging
from dataclasses import dataclass, field
from numbers import Integral
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from ellint.exceptions import (
    DuplicateVertexError,
    InvalidEdgeIndexError,
    NegativeDecorationError,
    SelfLoopContractionError,
    UnknownVertexError,
    ValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    """
    A directed edge carrying a decoration.

    Parameters
    ----------
    head : hashable
        Vertex the propagator's first argument sits on.
    tail : hashable
        Vertex the propagator's second argument sits on.
    n : int, optional
        Number of holomorphic derivatives on the edge. Default is 0.
    """

    head: Hashable
    tail: Hashable
    n: int = 0

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, Integral):
            raise NegativeDecorationError(
                f"decoration must be a non-negative integer, got {self.n!r}"
            )
        if self.n < 0:
            raise NegativeDecorationError(
                f"decoration must be non-negative, got {self.n} on edge {self.head}->{self.tail}"
            )
        object.__setattr__(self, "n", int(self.n))

    @property
    def is_self_loop(self) -> bool:
        return self.head == self.tail

    def reversed(self) -> "Edge":
        return Edge(self.tail, self.head, self.n)


@dataclass(frozen=True)
class GraphClass:
    """Structural summary of a graph, see :func:`classify`."""

    connected: bool
    self_loop_edges: Tuple[int, ...]
    multi_edge_pairs: Tuple[Tuple[Hashable, Hashable], ...]
    simple: bool


@dataclass(frozen=True)
class DecoratedGraph:
    """
    A directed multigraph with per-edge decorations.

    Parameters
    ----------
    vertices : sequence of hashable
        Distinct vertex identifiers; their order is the vertex order used by the
        graph polynomials (the last vertex is the default base vertex).
    edges : sequence of Edge
        Edges in index order.

    Examples
    --------
    >>> from ellint.graphs import DecoratedGraph, Edge
    >>> g = DecoratedGraph(("a", "b"), (Edge("a", "b"),))
    >>> g.n_vertices, g.n_edges
    (2, 1)
    """

    vertices: Tuple[Hashable, ...]
    edges: Tuple[Edge, ...] = ()
    _index: Dict[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges
        )
        index = {}
        for i, v in enumerate(vertices):
            if v in index:
                raise DuplicateVertexError(f"vertex {v!r} declared twice")
            index[v] = i
        for i, e in enumerate(edges):
            for end in (e.head, e.tail):
                if end not in index:
                    raise UnknownVertexError(
                        f"edge {i} refers to undeclared vertex {end!r}"
                    )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_index", index)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def decorations(self) -> Tuple[int, ...]:
        return tuple(e.n for e in self.edges)

    @property
    def weight(self) -> int:
        """Modular weight Σ(n_e + 2) of the graph integral."""
        return sum(e.n + 2 for e in self.edges)

    def vertex_index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def _check_edge(self, e) -> int:
        if isinstance(e, bool) or not isinstance(e, Integral):
            raise InvalidEdgeIndexError(f"edge index must be an integer, got {e!r}")
        if not 0 <= e < self.n_edges:
            raise InvalidEdgeIndexError(
                f"edge index {e} out of range for a graph with {self.n_edges} edges"
            )
        return int(e)

    def to_networkx(self) -> nx.MultiGraph:
        """Undirected view with edge attributes ``index`` and ``n``."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for i, e in enumerate(self.edges):
            graph.add_edge(e.head, e.tail, key=i, index=i, n=e.n)
        return graph

    def components(self) -> List[Tuple[Hashable, ...]]:
        """Connected components, each in vertex order, ordered by first vertex."""
        comps = [
            tuple(sorted(c, key=self.vertex_index))
            for c in nx.connected_components(self.to_networkx())
        ]
        return sorted(comps, key=lambda c: self.vertex_index(c[0]))

    def subgraph(self, vertices: Iterable) -> Tuple["DecoratedGraph", Tuple[int, ...]]:
        """
        Induced subgraph on ``vertices``.

        Returns
        -------
        subgraph : DecoratedGraph
        edge_map : tuple of int
            Original index of every edge of the subgraph.
        """
        keep = set(vertices)
        ordered = tuple(v for v in self.vertices if v in keep)
        edge_map = tuple(
            i
            for i, e in enumerate(self.edges)
            if e.head in keep and e.tail in keep
        )
        return DecoratedGraph(ordered, tuple(self.edges[i] for i in edge_map)), edge_map

    def relabel(self, mapping: Dict) -> "DecoratedGraph":
        """Rename vertices; the vertex order follows ``mapping`` applied in place."""
        return DecoratedGraph(
            tuple(mapping.get(v, v) for v in self.vertices),
            tuple(
                Edge(mapping.get(e.head, e.head), mapping.get(e.tail, e.tail), e.n)
                for e in self.edges
            ),
        )

    def reorder_vertices(self, order: Sequence) -> "DecoratedGraph":
        if sorted(map(self.vertex_index, order)) != list(range(self.n_vertices)):
            raise ValidationError("order must be a permutation of the vertices")
        return DecoratedGraph(tuple(order), self.edges)

    def reverse_edge(self, e: int) -> "DecoratedGraph":
        e = self._check_edge(e)
        edges = list(self.edges)
        edges[e] = edges[e].reversed()
        return DecoratedGraph(self.vertices, tuple(edges))

    def with_decorations(self, ns: Sequence[int]) -> "DecoratedGraph":
        if len(ns) != self.n_edges:
            raise ValidationError(
                f"expected {self.n_edges} decorations, got {len(ns)}"
            )
        return DecoratedGraph(
            self.vertices,
            tuple(Edge(e.head, e.tail, n) for e, n in zip(self.edges, ns)),
        )


def build_graph(edges: Sequence, vertices: Optional[Sequence] = None) -> DecoratedGraph:
    """
    Build a decorated graph from ``(head, tail, n)`` triples.

    Parameters
    ----------
    edges : sequence of (head, tail, n) or (head, tail)
        Edges in index order.
    vertices : sequence, optional
        Declared vertices. If omitted, vertices are taken from the edges in order
        of first appearance.

    Returns
    -------
    graph : DecoratedGraph

    Raises
    ------
    UnknownVertexError
        If an endpoint was not declared.
    NegativeDecorationError
        If a decoration is negative.
    """
    records = [tuple(spec) for spec in edges]
    if vertices is None:
        vertices = []
        for record in records:
            for end in record[:2]:
                if end not in vertices:
                    vertices.append(end)
    return DecoratedGraph(tuple(vertices), tuple(Edge(*r) for r in records))


def contract_edge(g: DecoratedGraph, e: int) -> DecoratedGraph:
    """
    Collapse edge ``e``, merging its endpoints.

    The merged vertex keeps the identifier (and position) of whichever endpoint
    comes first in the vertex order. Other edges keep their order and
    decorations; edges parallel to ``e`` become self-loops.
    """
    e = g._check_edge(e)
    edge = g.edges[e]
    if edge.is_self_loop:
        raise SelfLoopContractionError(f"edge {e} is a self-loop and cannot be contracted")
    keep, drop = sorted((edge.head, edge.tail), key=g.vertex_index)

    def _move(v):
        return keep if v == drop else v

    return DecoratedGraph(
        tuple(v for v in g.vertices if v != drop),
        tuple(
            Edge(_move(f.head), _move(f.tail), f.n)
            for i, f in enumerate(g.edges)
            if i != e
        ),
    )


def delete_edge(g: DecoratedGraph, e: int) -> DecoratedGraph:
    """Remove edge ``e``; vertices are untouched."""
    e = g._check_edge(e)
    return DecoratedGraph(g.vertices, g.edges[:e] + g.edges[e + 1 :])


def classify(g: DecoratedGraph) -> GraphClass:
    """
    Connectivity, self-loops and parallel edges of ``g``.

    Examples
    --------
    >>> from ellint.graphs import build_graph, classify
    >>> classify(build_graph([("a", "b", 0), ("b", "a", 0)])).simple
    False
    """
    loops = tuple(i for i, e in enumerate(g.edges) if e.is_self_loop)
    counts: Dict[Tuple, int] = {}
    for e in g.edges:
        if e.is_self_loop:
            continue
        pair = tuple(sorted((e.head, e.tail), key=g.vertex_index))
        counts[pair] = counts.get(pair, 0) + 1
    multi = tuple(
        sorted(
            (pair for pair, c in counts.items() if c >= 2),
            key=lambda p: (g.vertex_index(p[0]), g.vertex_index(p[1])),
        )
    )
    connected = nx.number_connected_components(g.to_networkx()) <= 1
    return GraphClass(
        connected=connected,
        self_loop_edges=loops,
        multi_edge_pairs=multi,
        simple=not loops and not multi,
    )


def first_betti(g: DecoratedGraph) -> int:
    """Loop number |E| − |V| + #components."""
    return g.n_edges - g.n_vertices + nx.number_connected_components(g.to_networkx())


def spanning_forest(g: DecoratedGraph) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Greedy spanning forest in edge-index order.

    Returns
    -------
    tree_edges : tuple of int
    chords : tuple of int
        Edges outside the forest (self-loops are always chords).
    """
    forest = UnionFind(g.vertices)
    tree, chords = [], []
    for i, e in enumerate(g.edges):
        if forest[e.head] != forest[e.tail]:
            forest.union(e.head, e.tail)
            tree.append(i)
        else:
            chords.append(i)
    return tuple(tree), tuple(chords)


def cycle_matrix(g: DecoratedGraph) -> np.ndarray:
    """
    Fundamental cycles of the greedy spanning forest.

    Column ``c`` is the integer circulation of the chord ``c``: the chord carries
    +1 and the tree path from its head back to its tail carries ±1 according to
    the edge orientations, so that ``incidence @ B = 0``.

    Returns
    -------
    B : ndarray of shape (n_edges, first_betti(g))
    """
    tree, chords = spanning_forest(g)
    forest = nx.MultiGraph()
    forest.add_nodes_from(g.vertices)
    for i in tree:
        forest.add_edge(g.edges[i].head, g.edges[i].tail, key=i)
    B = np.zeros((g.n_edges, len(chords)), dtype=int)
    for c, f in enumerate(chords):
        B[f, c] = 1
        chord = g.edges[f]
        if chord.is_self_loop:
            continue
        path = nx.shortest_path(forest, chord.head, chord.tail)
        for u, w in zip(path, path[1:]):
            (i,) = forest[u][w].keys()
            B[i, c] += 1 if g.edges[i].head == w else -1
    logger.debug("cycle matrix with %d chords over %d edges", len(chords), g.n_edges)
    return B
