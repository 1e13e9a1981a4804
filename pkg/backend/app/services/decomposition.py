"""
Graph Decomposition Service
Bridges, 2-edge-connected components, blocks and the block-graph predicate
"""

from collections import deque
from itertools import combinations
from typing import Dict, List, Tuple

import networkx as nx

from ..core.exceptions import InvariantViolation, PreconditionError
from ..models.analysis_models import (
    Block,
    BlockDecomposition,
    BlockGraphCheck,
    BridgeSet,
    TwoEdgeDecomposition,
)
from ..models.graph_models import WeightedGraph


def to_networkx(graph: WeightedGraph) -> nx.Graph:
    """networkx view with 'weight' and 'index' edge attributes"""
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    for i, edge in enumerate(graph.edges):
        nx_graph.add_edge(edge.u, edge.v, weight=edge.weight, index=i)
    return nx_graph


def connected_components(graph: WeightedGraph) -> List[Tuple[int, ...]]:
    """Vertex sets of the connected components, ordered by smallest vertex"""
    return _components(graph, skip=frozenset())


def is_connected(graph: WeightedGraph) -> bool:
    return len(connected_components(graph)) == 1


def _components(graph: WeightedGraph, skip: frozenset) -> List[Tuple[int, ...]]:
    seen = [False] * graph.n
    components = []
    for root in range(graph.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        members = [root]
        while queue:
            vertex = queue.popleft()
            for neighbor, edge_index in graph.adjacency[vertex]:
                if edge_index in skip or seen[neighbor]:
                    continue
                seen[neighbor] = True
                members.append(neighbor)
                queue.append(neighbor)
        components.append(tuple(sorted(members)))
    return components


def find_bridges(graph: WeightedGraph) -> BridgeSet:
    """Lowlink DFS (iterative); e is a bridge iff low[child] > disc[parent]"""
    disc = [-1] * graph.n
    low = [0] * graph.n
    bridges = []
    timer = 0

    for root in range(graph.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(graph.adjacency[root]))]
        while stack:
            vertex, parent_edge, neighbors = stack[-1]
            advanced = False
            for neighbor, edge_index in neighbors:
                if edge_index == parent_edge:
                    continue
                if disc[neighbor] == -1:
                    disc[neighbor] = low[neighbor] = timer
                    timer += 1
                    stack.append((neighbor, edge_index, iter(graph.adjacency[neighbor])))
                    advanced = True
                    break
                low[vertex] = min(low[vertex], disc[neighbor])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[vertex])
                if low[vertex] > disc[parent]:
                    bridges.append(parent_edge)

    return BridgeSet(bridges=tuple(bridges))


def two_edge_components(graph: WeightedGraph, bridges: BridgeSet = None) -> TwoEdgeDecomposition:
    """Components of G - B; on connected inputs k = |B| + 1 is checked"""
    if bridges is None:
        bridges = find_bridges(graph)
    components = _components(graph, skip=frozenset(bridges.bridges))
    component_of = [0] * graph.n
    for position, members in enumerate(components):
        for vertex in members:
            component_of[vertex] = position

    connected = is_connected(graph)
    identity_holds = None
    if connected:
        b = len(bridges)
        identity_holds = (
            len(components) == b + 1
            and sum(len(c) - 1 for c in components) + b == graph.n - 1
        )
        if not identity_holds:
            raise InvariantViolation(
                f"bridge/component identity failed: k={len(components)}, |B|={b}, n={graph.n}"
            )

    return TwoEdgeDecomposition(
        components=tuple(components),
        component_of=tuple(component_of),
        bridge_count=len(bridges),
        connected=connected,
        identity_holds=identity_holds,
    )


def block_decomposition(graph: WeightedGraph) -> BlockDecomposition:
    """Biconnected components via an edge stack; bridges come out as 2-vertex blocks"""
    disc = [-1] * graph.n
    low = [0] * graph.n
    edge_stack: List[int] = []
    raw_blocks: List[List[int]] = []
    timer = 0

    for root in range(graph.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(graph.adjacency[root]))]
        while stack:
            vertex, parent_edge, neighbors = stack[-1]
            advanced = False
            for neighbor, edge_index in neighbors:
                if edge_index == parent_edge:
                    continue
                if disc[neighbor] == -1:
                    edge_stack.append(edge_index)
                    disc[neighbor] = low[neighbor] = timer
                    timer += 1
                    stack.append((neighbor, edge_index, iter(graph.adjacency[neighbor])))
                    advanced = True
                    break
                if disc[neighbor] < disc[vertex]:
                    # back edge towards an ancestor
                    edge_stack.append(edge_index)
                    low[vertex] = min(low[vertex], disc[neighbor])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[vertex])
                if low[vertex] >= disc[parent]:
                    block_edges = []
                    while True:
                        popped = edge_stack.pop()
                        block_edges.append(popped)
                        if popped == parent_edge:
                            break
                    raw_blocks.append(block_edges)

    blocks = []
    for block_edges in raw_blocks:
        vertices = set()
        for edge_index in block_edges:
            vertices.update(graph.edges[edge_index].endpoints)
        blocks.append(Block(vertices=tuple(sorted(vertices)), edges=tuple(sorted(block_edges))))
    blocks.sort(key=lambda block: (block.vertices, block.edges))

    membership: Dict[int, int] = {}
    block_of_edge = [0] * graph.m
    for position, block in enumerate(blocks):
        for vertex in block.vertices:
            membership[vertex] = membership.get(vertex, 0) + 1
        for edge_index in block.edges:
            block_of_edge[edge_index] = position
    cut_vertices = tuple(sorted(v for v, count in membership.items() if count >= 2))

    if graph.n > 0 and len(connected_components(graph)) == 1:
        total = sum(block.order - 1 for block in blocks)
        if total != graph.n - 1:
            raise InvariantViolation(f"sum over blocks of (|V(B)| - 1) = {total} != n - 1")

    return BlockDecomposition(
        blocks=tuple(blocks),
        cut_vertices=cut_vertices,
        block_of_edge=tuple(block_of_edge),
    )


def is_block_graph(graph: WeightedGraph, blocks: BlockDecomposition = None) -> BlockGraphCheck:
    """Connected, and every block induces a complete graph"""
    if blocks is None:
        blocks = block_decomposition(graph)
    connected = is_connected(graph)

    for block in blocks.blocks:
        if block.is_clique:
            continue
        missing = next(
            (u, v) for u, v in combinations(block.vertices, 2) if not graph.has_edge(u, v)
        )
        return BlockGraphCheck(
            is_block_graph=False, connected=connected,
            offending_block=block, missing_edge=missing,
        )
    return BlockGraphCheck(is_block_graph=connected, connected=connected)


def is_block_graph_by_cliques(graph: WeightedGraph) -> bool:
    """Independent characterisation: connected, chordal, maximal cliques pairwise share <= 1 vertex"""
    nx_graph = to_networkx(graph)
    if not nx.is_connected(nx_graph):
        return False
    if not nx.is_chordal(nx_graph):
        return False
    cliques = [frozenset(clique) for clique in nx.find_cliques(nx_graph)]
    return all(len(a & b) <= 1 for a, b in combinations(cliques, 2))


def block_order(graph: WeightedGraph, blocks: BlockDecomposition = None) -> List[Block]:
    """Blocks B_1..B_t where each B_j (j >= 2) meets the earlier union in exactly one vertex"""
    if not is_connected(graph):
        raise PreconditionError("block order is defined on connected graphs")
    if blocks is None:
        blocks = block_decomposition(graph)
    remaining = list(blocks.blocks)
    if not remaining:
        return []

    ordered = [remaining.pop(0)]
    covered = set(ordered[0].vertices)
    while remaining:
        for position, block in enumerate(remaining):
            shared = covered.intersection(block.vertices)
            if not shared:
                continue
            if len(shared) != 1:
                raise InvariantViolation(f"block {block.vertices} shares {len(shared)} vertices")
            ordered.append(remaining.pop(position))
            covered.update(block.vertices)
            break
        else:
            raise InvariantViolation("block-cut structure is not connected")
    return ordered
