import itertools
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from sklearn.utils.validation import check_random_state

from ellint.exceptions import ValidationError
from ellint.graphs import DecoratedGraph, Edge, parse_graph_file
from ellint.utils import _check_integer, _process_parameter

EXAMPLES_DIR = Path(__file__).parent / "graphs"


def _names(n: int) -> Tuple[str, ...]:
    return tuple(f"v{i}" for i in range(n))


def edgeless(n_vertices: int = 1) -> DecoratedGraph:
    _check_integer("n_vertices", n_vertices)
    return DecoratedGraph(_names(n_vertices))


def self_loop(n: int = 0) -> DecoratedGraph:
    """One vertex carrying one self-loop decorated by ``n``."""
    return DecoratedGraph(("v0",), (Edge("v0", "v0", n),))


def single_edge(n: int = 0) -> DecoratedGraph:
    return DecoratedGraph(("v0", "v1"), (Edge("v0", "v1", n),))


def banana(k: int = 2, ns: Optional[Union[int, Sequence[int]]] = None) -> DecoratedGraph:
    """
    Two vertices joined by ``k`` parallel edges, all oriented ``v0 -> v1``.

    Parameters
    ----------
    k : int
        Number of edges.
    ns : int or sequence of int, optional
        Decorations, broadcast from a scalar. Default is 0 on every edge.
    """
    _check_integer("k", k, minimum=1)
    ns = _process_parameter("ns", ns, 0, k)
    return DecoratedGraph(("v0", "v1"), tuple(Edge("v0", "v1", n) for n in ns))


def cycle(n_vertices: int = 3) -> DecoratedGraph:
    """Oriented cycle ``v0 -> v1 -> ... -> v0``; ``cycle(3)`` is the triangle."""
    _check_integer("n_vertices", n_vertices, minimum=2)
    v = _names(n_vertices)
    return DecoratedGraph(
        v, tuple(Edge(v[i], v[(i + 1) % n_vertices]) for i in range(n_vertices))
    )


def triangle() -> DecoratedGraph:
    return cycle(3)


def path(n_vertices: int = 3) -> DecoratedGraph:
    _check_integer("n_vertices", n_vertices, minimum=1)
    v = _names(n_vertices)
    return DecoratedGraph(v, tuple(Edge(v[i], v[i + 1]) for i in range(n_vertices - 1)))


def star(n_leaves: int = 3) -> DecoratedGraph:
    _check_integer("n_leaves", n_leaves, minimum=1)
    v = _names(n_leaves + 1)
    return DecoratedGraph(v, tuple(Edge(v[0], leaf) for leaf in v[1:]))


def disjoint_union(*graphs: DecoratedGraph) -> DecoratedGraph:
    """Disjoint union; vertices are renamed ``g<i>.<name>``."""
    vertices, edges = [], []
    for i, g in enumerate(graphs):
        rename = {v: f"g{i}.{v}" for v in g.vertices}
        relabelled = g.relabel(rename)
        vertices.extend(relabelled.vertices)
        edges.extend(relabelled.edges)
    return DecoratedGraph(tuple(vertices), tuple(edges))


def load_example(name: str) -> DecoratedGraph:
    """Load one of the graph files shipped with the package, e.g. ``"triangle"``."""
    file = EXAMPLES_DIR / f"{name}.json"
    if not file.exists():
        available = sorted(p.stem for p in EXAMPLES_DIR.glob("*.json"))
        raise ValidationError(f"no example graph {name!r}; available: {available}")
    return parse_graph_file(file)


def connected_multigraphs(max_vertices: int, max_edges: int) -> Iterator[DecoratedGraph]:
    """
    Every connected multigraph without self-loops up to the given size.

    Edges are multisets of vertex pairs oriented from lower to higher vertex.
    Graphs are not reduced modulo isomorphism.
    """
    _check_integer("max_vertices", max_vertices, minimum=1)
    _check_integer("max_edges", max_edges)
    for n in range(1, max_vertices + 1):
        v = _names(n)
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(n - 1, max_edges + 1):
            for chosen in itertools.combinations_with_replacement(pairs, m):
                graph = nx.MultiGraph()
                graph.add_nodes_from(range(n))
                graph.add_edges_from(chosen)
                if nx.is_connected(graph):
                    yield DecoratedGraph(v, tuple(Edge(v[a], v[b]) for a, b in chosen))


class RandomGraphs:
    """
    Random connected multigraphs and Schwinger vectors.

    Parameters
    ----------
    n_vertices : int
        Number of vertices of every sample.
    n_edges : int or (int, int)
        Number of edges, or an inclusive range to draw it from. Must allow a
        connected graph, i.e. be at least ``n_vertices - 1``.
    max_decoration : int, optional
        Decorations are drawn from ``0..max_decoration``. Default is 0.
    random_state : int, RandomState instance or None, optional
        Pass an int for reproducible output across multiple function calls.
    """

    def __init__(
        self,
        n_vertices: int,
        n_edges: Union[int, Tuple[int, int]],
        max_decoration: int = 0,
        random_state: Union[int, np.random.RandomState] = None,
    ):
        self.n_vertices = _check_integer("n_vertices", n_vertices, minimum=1)
        if isinstance(n_edges, (tuple, list)):
            low, high = n_edges
        else:
            low = high = n_edges
        if n_vertices == 1 and high > 0:
            raise ValidationError("a single vertex admits no edges without self-loops")
        if low < n_vertices - 1 or high < low:
            raise ValidationError(
                f"n_edges={n_edges} cannot give a connected graph on {n_vertices} vertices"
            )
        self.n_edges = (int(low), int(high))
        self.max_decoration = _check_integer("max_decoration", max_decoration)
        self.random_state = check_random_state(random_state)

    def _one(self) -> DecoratedGraph:
        rng = self.random_state
        n = self.n_vertices
        v = _names(n)
        m = rng.randint(self.n_edges[0], self.n_edges[1] + 1)
        # random spanning tree first, then extra edges anywhere
        order = rng.permutation(n)
        pairs = [(order[rng.randint(i)], order[i]) for i in range(1, n)]
        while len(pairs) < m:
            a, b = rng.choice(n, size=2, replace=False)
            pairs.append((a, b))
        rng.shuffle(pairs)
        edges = []
        for a, b in pairs:
            if rng.rand() < 0.5:
                a, b = b, a
            edges.append(Edge(v[a], v[b], rng.randint(self.max_decoration + 1)))
        return DecoratedGraph(v, tuple(edges))

    def sample(self, n_samples: int = 1) -> List[DecoratedGraph]:
        return [self._one() for _ in range(n_samples)]

    def schwinger_vector(
        self, g: DecoratedGraph, low: float = 0.1, high: float = 10.0
    ) -> np.ndarray:
        """Edge times drawn uniformly from ``[low, high]``."""
        return self.random_state.uniform(low, high, size=g.n_edges)
