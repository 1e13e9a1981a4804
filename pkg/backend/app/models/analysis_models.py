"""
Structural Analysis Data Models
Bridges, edge-connected components, blocks, cycle witnesses and per-edge profiles
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .graph_models import Rational


def canonical_cycle(vertices: Sequence[int]) -> Tuple[int, ...]:
    """Rotate/reflect a cyclic sequence: smallest vertex first, its smaller neighbor second"""
    start = vertices.index(min(vertices))
    rotated = list(vertices[start:]) + list(vertices[:start])
    if len(rotated) > 2 and rotated[1] > rotated[-1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def cycle_edge_pairs(vertices: Sequence[int]) -> List[Tuple[int, int]]:
    """Edges of a cyclic vertex sequence as ordered (min, max) pairs"""
    pairs = []
    for i, u in enumerate(vertices):
        v = vertices[(i + 1) % len(vertices)]
        pairs.append((u, v) if u < v else (v, u))
    return pairs


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class BridgeSet(_Frozen):
    """The set B of bridge edge indices"""

    bridges: Tuple[int, ...] = ()

    @field_validator("bridges")
    @classmethod
    def sort_bridges(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(sorted(set(v)))

    def __contains__(self, edge_index: int) -> bool:
        return edge_index in self.bridges

    def __len__(self) -> int:
        return len(self.bridges)


class TwoEdgeDecomposition(_Frozen):
    """Components H_1..H_k of G - B"""

    components: Tuple[Tuple[int, ...], ...]
    component_of: Tuple[int, ...] = Field(..., description="vertex -> component position")
    bridge_count: int = Field(..., ge=0)
    connected: bool
    identity_holds: Optional[bool] = Field(
        None, description="k = |B| + 1 and sum(n_i - 1) + |B| = n - 1; None when disconnected"
    )

    @property
    def k(self) -> int:
        return len(self.components)


class Block(_Frozen):
    """A maximal biconnected subgraph, or a bridge as a 2-vertex block"""

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def is_bridge(self) -> bool:
        return len(self.vertices) == 2

    @property
    def is_clique(self) -> bool:
        r = len(self.vertices)
        return len(self.edges) == r * (r - 1) // 2


class BlockDecomposition(_Frozen):
    blocks: Tuple[Block, ...]
    cut_vertices: Tuple[int, ...]
    block_of_edge: Tuple[int, ...] = Field(..., description="edge index -> block position")

    def block_containing(self, edge_index: int) -> Block:
        return self.blocks[self.block_of_edge[edge_index]]


class BlockGraphCheck(_Frozen):
    is_block_graph: bool
    connected: bool
    offending_block: Optional[Block] = None
    missing_edge: Optional[Tuple[int, int]] = None


class CycleWitness(_Frozen):
    """A simple cycle in canonical form together with its exact weight"""

    vertices: Tuple[int, ...] = Field(..., min_length=3)
    weight: Rational

    @model_validator(mode="after")
    def check_canonical(self) -> "CycleWitness":
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"repeated vertex in cycle {self.vertices}")
        if canonical_cycle(self.vertices) != self.vertices:
            raise ValueError(f"cycle {self.vertices} is not in canonical form")
        return self

    @classmethod
    def from_sequence(cls, vertices: Sequence[int], weight: Fraction) -> "CycleWitness":
        return cls(vertices=canonical_cycle(vertices), weight=weight)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def edge_pairs(self) -> List[Tuple[int, int]]:
        return cycle_edge_pairs(self.vertices)

    def contains_edge(self, u: int, v: int) -> bool:
        pair = (u, v) if u < v else (v, u)
        return pair in self.edge_pairs()

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.vertices), self.vertices)


class LocalProfile(_Frozen):
    """Per-edge record: C_w(e), its witness, phi(e) = w(e)/C_w(e) and the bridge flag"""

    edge: int = Field(..., ge=0)
    u: int
    v: int
    weight: Rational
    is_bridge: bool
    c_w: Rational
    witness: Optional[CycleWitness] = None
    phi: Rational

    @model_validator(mode="after")
    def check_profile(self) -> "LocalProfile":
        if self.phi != self.weight / self.c_w:
            raise ValueError("phi must equal w(e) / C_w(e)")
        if self.is_bridge:
            if self.c_w != 2 * self.weight or self.witness is not None:
                raise ValueError("a bridge has C_w = 2 w(e) and no witness")
        else:
            if self.witness is None or self.witness.weight != self.c_w:
                raise ValueError("a cycle edge needs a witness of weight C_w(e)")
            if not self.witness.contains_edge(self.u, self.v):
                raise ValueError("the witness must pass through the edge")
            if not 0 < self.phi < 1:
                raise ValueError("phi of a cycle edge lies strictly between 0 and 1")
        return self


class HamiltonCatalog(_Frozen):
    """All undirected Hamilton cycles of K_r with per-edge incidence counts"""

    r: int = Field(..., ge=3)
    cycles: Tuple[CycleWitness, ...]
    incidence: Dict[Tuple[int, int], int]

    @property
    def size(self) -> int:
        return len(self.cycles)


class TwoOptConnectivity(_Frozen):
    """Meta-graph on Hamilton cycles of K_r, adjacent when two cycles share an edge"""

    r: int
    node_count: int
    component_count: int
    connected: bool
