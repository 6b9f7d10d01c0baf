"""
JSON graph files.

A graph file holds one object ``{"vertices": [names], "edges": [{"head": name,
"tail": name, "n": int}, ...]}``; the edge order in the file is the edge index.
"""
import json
from numbers import Integral
from pathlib import Path
from typing import Union

from ellint.exceptions import ParseError
from ellint.graphs._graph import DecoratedGraph, Edge


def graph_to_dict(g: DecoratedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"head": e.head, "tail": e.tail, "n": e.n} for e in g.edges],
    }


def graph_from_dict(data, source: str = "<graph>") -> DecoratedGraph:
    """
    Validate a decoded graph object field by field.

    Raises
    ------
    ParseError
        Naming the offending field, e.g. ``edges[2].n``.
    """
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("vertices", "edges"):
        if key not in data:
            raise ParseError(f"{source}: missing field '{key}'")
    vertices = data["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ParseError(f"{source}: 'vertices' must be a list of strings")
    if len(set(vertices)) != len(vertices):
        raise ParseError(f"{source}: 'vertices' contains duplicates")
    if not isinstance(data["edges"], list):
        raise ParseError(f"{source}: 'edges' must be a list")
    declared = set(vertices)
    edges = []
    for i, record in enumerate(data["edges"]):
        where = f"{source}: edges[{i}]"
        if not isinstance(record, dict):
            raise ParseError(f"{where} must be an object")
        for key in ("head", "tail"):
            if key not in record:
                raise ParseError(f"{where}: missing field '{key}'")
            if record[key] not in declared:
                raise ParseError(f"{where}.{key}: unknown vertex {record[key]!r}")
        n = record.get("n", 0)
        if isinstance(n, bool) or not isinstance(n, Integral) or n < 0:
            raise ParseError(f"{where}.n: must be a non-negative integer, got {n!r}")
        edges.append(Edge(record["head"], record["tail"], n))
    return DecoratedGraph(tuple(vertices), tuple(edges))


def dumps_graph(g: DecoratedGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"


def parse_graph_file(path: Union[str, Path]) -> DecoratedGraph:
    """
    Read a graph file.

    Parameters
    ----------
    path : str or Path

    Returns
    -------
    graph : DecoratedGraph

    Raises
    ------
    ParseError
        On unreadable files, malformed JSON (with line and column) or schema
        violations (with the field path).
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read graph file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return graph_from_dict(data, source=str(path))


def write_graph_file(g: DecoratedGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_graph(g))
