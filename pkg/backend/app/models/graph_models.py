"""
Weighted Graph Data Models
Exact rational scalars and the immutable simple weighted graph
"""

import re
from fractions import Fraction
from typing import Annotated, Any, Dict, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    PrivateAttr,
    field_validator,
    model_validator,
)

# <int>, <int>/<posint> or a decimal literal, optionally signed
RATIONAL_LITERAL = re.compile(r"^[+-]?(\d+(/\d+)?|\d+\.\d*|\.\d+)$")


def parse_rational(value: Any) -> Fraction:
    """Convert an int, Fraction, or literal string to an exact Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # Float entry mode: the decimal literal, not the binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not RATIONAL_LITERAL.match(text):
            raise ValueError(f"not a rational literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}") from None
    raise ValueError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when q = 1"""
    return str(value)


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]


class Edge(BaseModel):
    """An undirected weighted edge; endpoints are stored with u < v"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: int = Field(..., ge=0)
    v: int = Field(..., ge=0)
    weight: Rational

    @model_validator(mode="before")
    @classmethod
    def order_endpoints(cls, data: Any) -> Any:
        if isinstance(data, dict):
            u, v = data.get("u"), data.get("v")
            if isinstance(u, int) and isinstance(v, int) and u > v:
                data = {**data, "u": v, "v": u}
        return data

    @model_validator(mode="after")
    def check_simple_and_positive(self) -> "Edge":
        if self.u == self.v:
            raise ValueError(f"loop at vertex {self.u}")
        if self.weight <= 0:
            raise ValueError(f"non-positive weight {self.weight} on edge {self.u}-{self.v}")
        return self

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def other(self, vertex: int) -> int:
        """Endpoint opposite to vertex"""
        return self.v if vertex == self.u else self.u


class WeightedGraph(BaseModel):
    """Simple undirected graph on vertices 0..n-1 with positive rational weights.

    Edges are kept sorted by (u, v); an edge index is its position in that order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    edges: Tuple[Edge, ...] = ()

    _adjacency: Tuple[Tuple[Tuple[int, int], ...], ...] = PrivateAttr(default=())
    _index: Dict[Tuple[int, int], int] = PrivateAttr(default_factory=dict)

    @field_validator("edges")
    @classmethod
    def sort_edges(cls, v: Tuple[Edge, ...]) -> Tuple[Edge, ...]:
        return tuple(sorted(v, key=lambda edge: (edge.u, edge.v)))

    @model_validator(mode="after")
    def check_simple_graph(self) -> "WeightedGraph":
        seen = set()
        for edge in self.edges:
            if edge.v >= self.n:
                raise ValueError(f"vertex {edge.v} out of range for n={self.n}")
            if edge.endpoints in seen:
                raise ValueError(f"duplicate edge {edge.u}-{edge.v}")
            seen.add(edge.endpoints)
        return self

    def model_post_init(self, __context: Any) -> None:
        adjacency = [[] for _ in range(self.n)]
        index = {}
        for i, edge in enumerate(self.edges):
            adjacency[edge.u].append((edge.v, i))
            adjacency[edge.v].append((edge.u, i))
            index[edge.endpoints] = i
        self._adjacency = tuple(tuple(sorted(entries)) for entries in adjacency)
        self._index = index

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """Per-vertex (neighbor, edge index) pairs, sorted by neighbor"""
        return self._adjacency

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return tuple(edge.weight for edge in self.edges)

    def neighbors(self, vertex: int) -> Tuple[int, ...]:
        return tuple(neighbor for neighbor, _ in self._adjacency[vertex])

    def degree(self, vertex: int) -> int:
        return len(self._adjacency[vertex])

    def edge_index(self, u: int, v: int) -> Optional[int]:
        return self._index.get((u, v) if u < v else (v, u))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_index(u, v) is not None

    def weight(self, u: int, v: int) -> Fraction:
        index = self.edge_index(u, v)
        if index is None:
            raise KeyError(f"no edge {u}-{v}")
        return self.edges[index].weight

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


class SubgraphWeight(BaseModel):
    """w(H): the total weight of a set of edges"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    edge_indices: Tuple[int, ...]
    value: Rational


class GraphLoadResult(BaseModel):
    """A parsed graph plus the input-label -> vertex mapping"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: WeightedGraph
    labels: Tuple[str, ...] = Field(..., description="labels[i] is the input label of vertex i")
    relabelled: bool = False
