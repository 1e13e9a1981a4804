"""
Weighted Graph Codec
Edge-list text format, its JSON mirror, and exact weight sums

Text format (one record per line, '#' starts a comment):
    n <N>
    e <u> <v> <weight>      weight: <int> | <int>/<posint> | decimal literal
"""

import re
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import orjson

from ..core.exceptions import GraphFormatError, GraphValidationError
from ..models.graph_models import (
    Edge,
    GraphLoadResult,
    SubgraphWeight,
    WeightedGraph,
    format_rational,
    parse_rational,
)

INTEGER_LABEL = re.compile(r"^\d+$")

TextInput = Union[str, bytes, bytearray]


def _decode(text: TextInput) -> str:
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as error:
            raise GraphFormatError(f"input is not valid UTF-8: {error}") from None
    return text


def _parse_weight(token: str, line_number: int) -> Fraction:
    try:
        weight = parse_rational(token)
    except ValueError:
        raise GraphFormatError(f"malformed weight {token!r}", line_number) from None
    if weight <= 0:
        raise GraphValidationError(f"non-positive weight {token}", line_number)
    return weight


def load_graph(text: TextInput) -> GraphLoadResult:
    """Parse the edge-list format, returning the graph and the label mapping"""
    n: Optional[int] = None
    records: List[Tuple[int, str, str, Fraction]] = []

    for line_number, raw_line in enumerate(_decode(text).splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        tag = tokens[0]

        if tag == "n":
            if n is not None:
                raise GraphFormatError("duplicate header", line_number)
            if len(tokens) != 2 or not INTEGER_LABEL.match(tokens[1]):
                raise GraphFormatError("header must be 'n <N>'", line_number)
            n = int(tokens[1])
            if n < 1:
                raise GraphValidationError("vertex count must be at least 1", line_number)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge record before the 'n <N>' header", line_number)
            if len(tokens) != 4:
                raise GraphFormatError("edge record must be 'e <u> <v> <weight>'", line_number)
            records.append((line_number, tokens[1], tokens[2], _parse_weight(tokens[3], line_number)))
        else:
            raise GraphFormatError(f"unknown record type {tag!r}", line_number)

    if n is None:
        raise GraphFormatError("missing header 'n <N>'")

    relabelled = not all(
        INTEGER_LABEL.match(u) and INTEGER_LABEL.match(v) for _, u, v, _ in records
    )
    mapping: Dict[str, int] = {}

    def resolve(label: str, line_number: int) -> int:
        if not relabelled:
            vertex = int(label)
            if vertex >= n:
                raise GraphValidationError(
                    f"vertex index {vertex} out of range for n={n}", line_number
                )
            return vertex
        if label not in mapping:
            if len(mapping) == n:
                raise GraphValidationError(
                    f"label {label!r} exceeds the declared {n} vertices", line_number
                )
            mapping[label] = len(mapping)
        return mapping[label]

    edges = []
    seen: Dict[Tuple[int, int], int] = {}
    for line_number, u_label, v_label, weight in records:
        u, v = resolve(u_label, line_number), resolve(v_label, line_number)
        if u == v:
            raise GraphValidationError(f"loop at vertex {u_label}", line_number)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphValidationError(
                f"duplicate edge {u_label}-{v_label} (first on line {seen[key]})", line_number
            )
        seen[key] = line_number
        edges.append(Edge(u=u, v=v, weight=weight))

    if relabelled:
        labels = [""] * n
        for label, vertex in mapping.items():
            labels[vertex] = label
        for vertex in range(len(mapping), n):
            labels[vertex] = f"<isolated {vertex}>"
    else:
        labels = [str(vertex) for vertex in range(n)]

    return GraphLoadResult(
        graph=WeightedGraph(n=n, edges=tuple(edges)),
        labels=tuple(labels),
        relabelled=relabelled,
    )


def parse_graph(text: TextInput) -> WeightedGraph:
    """Parse and validate the edge-list format"""
    return load_graph(text).graph


def serialize_graph(graph: WeightedGraph) -> str:
    """Canonical text: header, then edges sorted by (u, v)"""
    lines = [f"n {graph.n}"]
    lines.extend(
        f"e {edge.u} {edge.v} {format_rational(edge.weight)}" for edge in graph.edges
    )
    return "\n".join(lines) + "\n"


def graph_to_payload(graph: WeightedGraph) -> Dict[str, Any]:
    return {
        "n": graph.n,
        "edges": [[edge.u, edge.v, format_rational(edge.weight)] for edge in graph.edges],
    }


def graph_to_json(graph: WeightedGraph) -> bytes:
    """JSON mirror: {"n": N, "edges": [[u, v, "p/q"], ...]}"""
    return orjson.dumps(graph_to_payload(graph))


def graph_from_json(data: Union[TextInput, Mapping[str, Any]]) -> WeightedGraph:
    if not isinstance(data, Mapping):
        try:
            data = orjson.loads(data)
        except orjson.JSONDecodeError as error:
            raise GraphFormatError(f"invalid JSON: {error}") from None
    if not isinstance(data, Mapping) or not isinstance(data.get("n"), int):
        raise GraphFormatError("JSON graph needs an integer 'n'")

    n = data["n"]
    if n < 1:
        raise GraphValidationError("vertex count must be at least 1")
    edges = []
    seen = set()
    for position, item in enumerate(data.get("edges", [])):
        if not (isinstance(item, (list, tuple)) and len(item) == 3):
            raise GraphFormatError(f"edge {position} must be [u, v, weight]")
        u, v, weight = item
        if any(not isinstance(x, int) or isinstance(x, bool) for x in (u, v)):
            raise GraphFormatError(f"edge {position} has non-integer endpoints")
        try:
            value = parse_rational(weight)
        except ValueError:
            raise GraphFormatError(f"edge {position} has malformed weight {weight!r}") from None
        if value <= 0:
            raise GraphValidationError(f"edge {position} has non-positive weight {weight}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(f"edge {position} has a vertex out of range for n={n}")
        if u == v:
            raise GraphValidationError(f"edge {position} is a loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphValidationError(f"edge {position} duplicates {key[0]}-{key[1]}")
        seen.add(key)
        edges.append(Edge(u=u, v=v, weight=value))

    return WeightedGraph(n=n, edges=tuple(edges))


def total_weight(graph: WeightedGraph) -> Fraction:
    """w(G), the exact sum of all edge weights"""
    return sum(graph.weights, Fraction(0))


def subgraph_weight(graph: WeightedGraph, edge_indices: Iterable[int]) -> SubgraphWeight:
    indices = tuple(sorted(set(edge_indices)))
    value = sum((graph.edges[i].weight for i in indices), Fraction(0))
    return SubgraphWeight(edge_indices=indices, value=value)


def with_weights(
    graph: WeightedGraph,
    weights: Union[Mapping[int, Fraction], Sequence[Fraction]],
) -> WeightedGraph:
    """Same structure, new weights (indexed by edge index)"""
    edges = tuple(
        Edge(u=edge.u, v=edge.v, weight=weights[i]) for i, edge in enumerate(graph.edges)
    )
    return WeightedGraph(n=graph.n, edges=edges)


def unit_weights(graph: WeightedGraph) -> WeightedGraph:
    """The w = 1 specialisation of a graph"""
    return with_weights(graph, [Fraction(1)] * graph.m)


def induced_subgraph(
    graph: WeightedGraph, vertices: Iterable[int]
) -> Tuple[WeightedGraph, Tuple[int, ...], Tuple[int, ...]]:
    """Subgraph induced by vertices, relabelled 0..k-1 in increasing order.

    Returns (subgraph, local -> global vertex map, local -> global edge index map).
    """
    keep = tuple(sorted(set(vertices)))
    local = {vertex: i for i, vertex in enumerate(keep)}
    edges = []
    edge_map = []
    for i, edge in enumerate(graph.edges):
        if edge.u in local and edge.v in local:
            edges.append(Edge(u=local[edge.u], v=local[edge.v], weight=edge.weight))
            edge_map.append(i)
    # local edges stay sorted because the relabelling is monotone
    return WeightedGraph(n=max(len(keep), 1), edges=tuple(edges)), keep, tuple(edge_map)
