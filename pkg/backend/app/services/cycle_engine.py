"""
Cycle Engine Service
Exact cycle machinery: enumeration, heaviest cycle through an edge, Hamilton
catalogs of K_r and the share-an-edge structure on Hamilton cycles
"""

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import permutations
from math import factorial, lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ..core.config import settings
from ..core.exceptions import CapExceededError, InvariantViolation, PreconditionError
from ..core.logger import LoggerMixin
from ..models.analysis_models import (
    Block,
    BlockDecomposition,
    CycleWitness,
    HamiltonCatalog,
    LocalProfile,
    TwoOptConnectivity,
    canonical_cycle,
    cycle_edge_pairs,
)
from ..models.graph_models import WeightedGraph
from ..models.spec_models import RunConfig
from .decomposition import block_decomposition
from .graph_codec import unit_weights

# (order, [(a, b, integer weight)], [local target edge positions])
BlockJob = Tuple[int, List[Tuple[int, int, int]], List[int]]
# (best integer weight, local cycle, search nodes)
SearchResult = Tuple[int, Tuple[int, ...], int]


def _cycle_key(cycle: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    canonical = canonical_cycle(cycle)
    return (len(canonical), canonical)


def _heaviest_through(
    order: int,
    edges: List[Tuple[int, int, int]],
    target: int,
) -> SearchResult:
    """Branch and bound over source-target paths in G - e, integer weights.

    The bound is the path weight plus w(e) plus every edge still inside the
    set of vertices the path may use (admissible for nonnegative weights).
    Ties are kept so the canonically smallest maximum cycle wins.
    """
    source, sink, edge_weight = edges[target]
    adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(order)]
    remaining = 0
    for position, (a, b, w) in enumerate(edges):
        if position == target:
            continue
        adjacency[a].append((b, w))
        adjacency[b].append((a, w))
        remaining += w
    for entries in adjacency:
        entries.sort()

    reachable = [True] * order
    path = [source]
    best_weight = -1
    best_cycle: Tuple[int, ...] = ()
    best_key = None
    nodes = 0

    def extend(tip: int, length: int, budget: int) -> None:
        nonlocal best_weight, best_cycle, best_key, nodes
        nodes += 1
        if tip == sink:
            total = length + edge_weight
            if total > best_weight:
                best_weight, best_cycle, best_key = total, tuple(path), _cycle_key(path)
            elif total == best_weight:
                key = _cycle_key(path)
                if key < best_key:
                    best_cycle, best_key = tuple(path), key
            return
        if length + edge_weight + budget < best_weight:
            return
        reachable[tip] = False
        rest = budget - sum(w for z, w in adjacency[tip] if reachable[z])
        for z, w in adjacency[tip]:
            if reachable[z]:
                path.append(z)
                extend(z, length + w, rest)
                path.pop()
        reachable[tip] = True

    extend(source, 0, remaining)
    return best_weight, best_cycle, nodes


def _search_block(job: BlockJob) -> List[SearchResult]:
    """Worker entry point: every target edge of one block"""
    order, edges, targets = job
    return [_heaviest_through(order, edges, target) for target in targets]


class CycleEngine(LoggerMixin):
    """Exact cycle searches over a shared immutable graph"""

    def __init__(self, config: Optional[RunConfig] = None):
        super().__init__()
        config = config or RunConfig.from_settings(settings)
        self.enumeration_cap = config.enumeration_cap
        self.search_cap = config.search_cap
        self.max_workers = config.max_workers
        self.hamilton_max_order = config.hamilton_max_order
        self.two_opt_max_order = config.two_opt_max_order
        self.performance_metrics = {
            'searches': 0,
            'search_nodes': 0,
            'cycles_enumerated': 0,
            'parallel_batches': 0,
        }
        self._catalogs: Dict[int, HamiltonCatalog] = {}

    # ------------------------------------------------------------------
    # enumeration

    def enumerate_cycles(
        self, graph: WeightedGraph, vertex_cap: Optional[int] = None
    ) -> Iterator[CycleWitness]:
        """Every simple cycle exactly once, canonical form, deterministic order"""
        cap = vertex_cap if vertex_cap is not None else self.enumeration_cap
        if graph.n > cap:
            raise CapExceededError("enumeration_cap", cap, graph.n)
        return self._enumerate(graph)

    def _enumerate(self, graph: WeightedGraph) -> Iterator[CycleWitness]:
        adjacency = graph.adjacency
        weights = graph.weights
        for start in range(graph.n):
            # start is the smallest vertex of every cycle found from it
            path = [start]
            on_path = {start}
            stack = [(iter(adjacency[start]), Fraction(0))]
            while stack:
                neighbors, length = stack[-1]
                step = next(neighbors, None)
                if step is None:
                    stack.pop()
                    on_path.discard(path.pop())
                    continue
                neighbor, edge_index = step
                if neighbor == start:
                    if len(path) >= 3 and path[1] < path[-1]:
                        self.performance_metrics['cycles_enumerated'] += 1
                        yield CycleWitness(
                            vertices=tuple(path), weight=length + weights[edge_index]
                        )
                    continue
                if neighbor < start or neighbor in on_path:
                    continue
                path.append(neighbor)
                on_path.add(neighbor)
                stack.append((iter(adjacency[neighbor]), length + weights[edge_index]))

    def enumerate_block_cycles(
        self, graph: WeightedGraph, blocks: Optional[BlockDecomposition] = None
    ) -> Iterator[CycleWitness]:
        """All simple cycles, one block at a time; the enumeration cap applies per block"""
        blocks = blocks or block_decomposition(graph)
        for block in blocks.blocks:
            if block.order < 3:
                continue
            if block.order > self.enumeration_cap:
                raise CapExceededError("enumeration_cap", self.enumeration_cap, block.order)
        for block in blocks.blocks:
            if block.order < 3:
                continue
            local_graph = _block_graph(graph, block)
            for cycle in self._enumerate(local_graph):
                yield CycleWitness(
                    vertices=tuple(block.vertices[i] for i in cycle.vertices),
                    weight=cycle.weight,
                )

    # ------------------------------------------------------------------
    # heaviest cycles

    def heaviest_cycle_through(
        self, graph: WeightedGraph, edge_index: int,
        blocks: Optional[BlockDecomposition] = None,
    ) -> Tuple[Fraction, Optional[CycleWitness]]:
        """C_w(e) with a witness; (2 w(e), None) for a bridge.

        Among heaviest cycles the witness has the fewest edges, then the
        smallest canonical vertex tuple.
        """
        if not 0 <= edge_index < graph.m:
            raise PreconditionError(f"edge index {edge_index} out of range for m={graph.m}")
        blocks = blocks or block_decomposition(graph)
        block = blocks.block_containing(edge_index)
        edge = graph.edges[edge_index]
        if block.is_bridge:
            return 2 * edge.weight, None
        if block.order > self.search_cap:
            raise CapExceededError("search_cap", self.search_cap, block.order)

        job, scale = _block_job(graph, block, [edge_index])
        (result,) = _search_block(job)
        return self._witness_from_result(graph, block, result, scale)

    def brute_force_c_w(
        self, graph: WeightedGraph, blocks: Optional[BlockDecomposition] = None
    ) -> Dict[int, Fraction]:
        """C_w(e) for every cycle edge as the maximum over enumerated cycles"""
        best: Dict[int, Fraction] = {}
        for cycle in self.enumerate_block_cycles(graph, blocks):
            for u, v in cycle.edge_pairs():
                edge_index = graph.edge_index(u, v)
                if edge_index not in best or cycle.weight > best[edge_index]:
                    best[edge_index] = cycle.weight
        return best

    def heaviest_cycle(
        self, graph: WeightedGraph
    ) -> Tuple[Optional[Fraction], Optional[CycleWitness]]:
        """Maximum cycle weight, or (None, None) on a forest"""
        best: Optional[CycleWitness] = None
        for profile in self.local_profiles(graph):
            witness = profile.witness
            if witness is None:
                continue
            if best is None or (-witness.weight, witness.sort_key()) < (-best.weight, best.sort_key()):
                best = witness
        if best is None:
            return None, None
        return best.weight, best

    def heaviest_cycle_under(
        self, graph: WeightedGraph, weighting: Sequence[Fraction],
        blocks: Optional[BlockDecomposition] = None,
    ) -> Tuple[Optional[Fraction], Optional[CycleWitness]]:
        """Maximum cycle weight under a nonnegative weighting of the edges.

        The witness carries the weighting total, not the graph weight.
        Zero entries are allowed; (None, None) on a forest.
        """
        if len(weighting) != graph.m:
            raise PreconditionError(f"weighting has {len(weighting)} entries, graph has m={graph.m}")
        values = [Fraction(x) for x in weighting]
        negative = [i for i, x in enumerate(values) if x < 0]
        if negative:
            raise PreconditionError(f"weighting is negative on edge {negative[0]}")
        blocks = blocks or block_decomposition(graph)

        best: Optional[CycleWitness] = None
        for block in blocks.blocks:
            if block.is_bridge:
                continue
            if block.order > self.search_cap:
                raise CapExceededError("search_cap", self.search_cap, block.order)
            job, scale = _block_job(graph, block, list(block.edges), values)
            for result in _search_block(job):
                _, witness = self._witness_from_result(graph, block, result, scale)
                if best is None or (-witness.weight, witness.sort_key()) < (-best.weight, best.sort_key()):
                    best = witness
        if best is None:
            return None, None
        return best.weight, best

    def longest_cycle_through(
        self, graph: WeightedGraph, edge_index: int,
        blocks: Optional[BlockDecomposition] = None,
    ) -> int:
        """c(e): length of a longest cycle through e, 2 for a bridge"""
        c_w, _ = self.heaviest_cycle_through(unit_weights(graph), edge_index, blocks)
        return int(c_w)

    def local_profiles(
        self, graph: WeightedGraph, blocks: Optional[BlockDecomposition] = None
    ) -> Tuple[LocalProfile, ...]:
        """Batch C_w(e) / phi(e) for every edge, in edge index order"""
        start_time = time.time()
        blocks = blocks or block_decomposition(graph)

        jobs: List[BlockJob] = []
        owners: List[Tuple[Block, List[int], int]] = []
        for block in blocks.blocks:
            if block.is_bridge:
                continue
            if block.order > self.search_cap:
                raise CapExceededError("search_cap", self.search_cap, block.order)
            targets = list(block.edges)
            job, scale = _block_job(graph, block, targets)
            jobs.append(job)
            owners.append((block, targets, scale))

        if self.max_workers > 1 and len(jobs) > 1:
            self.performance_metrics['parallel_batches'] += 1
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                outcomes = list(executor.map(_search_block, jobs))
        else:
            outcomes = [_search_block(job) for job in jobs]

        c_w_of: Dict[int, Tuple[Fraction, CycleWitness]] = {}
        for (block, targets, scale), results in zip(owners, outcomes):
            for edge_index, result in zip(targets, results):
                c_w_of[edge_index] = self._witness_from_result(graph, block, result, scale)

        profiles = []
        for edge_index, edge in enumerate(graph.edges):
            if edge_index in c_w_of:
                c_w, witness = c_w_of[edge_index]
                self.check_witness(graph, witness)
                is_bridge = False
            else:
                c_w, witness, is_bridge = 2 * edge.weight, None, True
            profiles.append(LocalProfile(
                edge=edge_index, u=edge.u, v=edge.v, weight=edge.weight,
                is_bridge=is_bridge, c_w=c_w, witness=witness, phi=edge.weight / c_w,
            ))

        self.log_performance(f"local_profiles(n={graph.n}, m={graph.m})", time.time() - start_time)
        return tuple(profiles)

    def _witness_from_result(
        self, graph: WeightedGraph, block: Block, result: SearchResult, scale: int
    ) -> Tuple[Fraction, CycleWitness]:
        best, local_cycle, nodes = result
        self.performance_metrics['searches'] += 1
        self.performance_metrics['search_nodes'] += nodes
        if best < 0:
            raise InvariantViolation(f"no cycle found inside non-bridge block {block.vertices}")
        weight = Fraction(best, scale)
        witness = CycleWitness.from_sequence(
            [block.vertices[i] for i in local_cycle], weight
        )
        return weight, witness

    @staticmethod
    def check_witness(graph: WeightedGraph, witness: CycleWitness) -> None:
        """Consecutive vertices adjacent and the stored weight exact"""
        total = Fraction(0)
        for u, v in witness.edge_pairs():
            if not graph.has_edge(u, v):
                raise InvariantViolation(f"witness {witness.vertices} uses a non-edge {u}-{v}")
            total += graph.weight(u, v)
        if total != witness.weight:
            raise InvariantViolation(
                f"witness {witness.vertices} weighs {total}, recorded {witness.weight}"
            )

    # ------------------------------------------------------------------
    # Hamilton cycles of K_r

    def hamilton_catalog(self, r: int) -> HamiltonCatalog:
        """All (r-1)!/2 Hamilton cycles of K_r with per-edge incidence counts"""
        if not 3 <= r <= self.hamilton_max_order:
            raise PreconditionError(
                f"Hamilton catalog needs 3 <= r <= {self.hamilton_max_order}, got {r}"
            )
        if r in self._catalogs:
            return self._catalogs[r]

        cycles = []
        incidence: Dict[Tuple[int, int], int] = {
            (u, v): 0 for u in range(r) for v in range(u + 1, r)
        }
        for rest in permutations(range(1, r)):
            if rest[0] > rest[-1]:
                continue
            vertices = (0,) + rest
            cycles.append(CycleWitness(vertices=vertices, weight=Fraction(r)))
            for pair in cycle_edge_pairs(vertices):
                incidence[pair] += 1

        if len(cycles) != factorial(r - 1) // 2:
            raise InvariantViolation(f"K_{r} has {len(cycles)} Hamilton cycles, expected (r-1)!/2")
        expected = factorial(r - 2)
        uneven = {pair: count for pair, count in incidence.items() if count != expected}
        if uneven:
            raise InvariantViolation(f"Hamilton incidence differs from (r-2)! = {expected}: {uneven}")

        catalog = HamiltonCatalog(r=r, cycles=tuple(cycles), incidence=incidence)
        self._catalogs[r] = catalog
        self.logger.debug(f"Hamilton catalog K_{r}: {catalog.size} cycles, incidence {expected}")
        return catalog

    def two_opt_graph_connected(self, r: int) -> TwoOptConnectivity:
        """Meta-graph on Hamilton cycles, adjacent when they share a graph edge"""
        if not 4 <= r <= self.two_opt_max_order:
            raise PreconditionError(
                f"2-opt meta-graph needs 4 <= r <= {self.two_opt_max_order}, got {r}"
            )
        catalog = self.hamilton_catalog(r)
        containing: Dict[Tuple[int, int], List[int]] = {pair: [] for pair in catalog.incidence}
        for position, cycle in enumerate(catalog.cycles):
            for pair in cycle.edge_pairs():
                containing[pair].append(position)

        meta = nx.Graph()
        meta.add_nodes_from(range(catalog.size))
        for members in containing.values():
            # a path through the cycles sharing this edge has the same components as a clique
            meta.add_edges_from(zip(members, members[1:]))

        components = nx.number_connected_components(meta)
        return TwoOptConnectivity(
            r=r, node_count=catalog.size,
            component_count=components, connected=components == 1,
        )

    def transposition_moves_share_edge(self, r: int) -> bool:
        """Swapping two consecutive vertices of a Hamilton cycle keeps at least one edge"""
        if not 4 <= r <= self.hamilton_max_order:
            raise PreconditionError(
                f"transposition check needs 4 <= r <= {self.hamilton_max_order}, got {r}"
            )
        for cycle in self.hamilton_catalog(r).cycles:
            original = set(cycle.edge_pairs())
            for i in range(r):
                moved = list(cycle.vertices)
                j = (i + 1) % r
                moved[i], moved[j] = moved[j], moved[i]
                if original.isdisjoint(cycle_edge_pairs(moved)):
                    self.logger.warning(f"transposition at {i} of {cycle.vertices} shares no edge")
                    return False
        return True


def two_opt_swap(cycle: Sequence[int], i: int, j: int) -> Tuple[int, ...]:
    """Replace edges (c_i, c_i+1) and (c_j, c_j+1) by (c_i, c_j) and (c_i+1, c_j+1)"""
    r = len(cycle)
    if not 0 <= i < j < r or j - i < 2 or (i == 0 and j == r - 1):
        raise PreconditionError(f"positions {i}, {j} do not name two non-adjacent cycle edges")
    swapped = list(cycle[: i + 1]) + list(reversed(cycle[i + 1 : j + 1])) + list(cycle[j + 1 :])
    return canonical_cycle(swapped)


def _block_graph(graph: WeightedGraph, block: Block) -> WeightedGraph:
    local = {vertex: i for i, vertex in enumerate(block.vertices)}
    edges = []
    for edge_index in block.edges:
        edge = graph.edges[edge_index]
        edges.append({"u": local[edge.u], "v": local[edge.v], "weight": edge.weight})
    return WeightedGraph(n=block.order, edges=tuple(edges))


def _block_job(
    graph: WeightedGraph, block: Block, targets: Sequence[int],
    weights: Optional[Sequence[Fraction]] = None,
) -> Tuple[BlockJob, int]:
    """Plain-data search job for one block, weights scaled to integers.

    `weights` replaces the graph weights, indexed by edge; zeros are allowed.
    """
    if weights is None:
        weights = graph.weights
    local = {vertex: i for i, vertex in enumerate(block.vertices)}
    scale = lcm(*(weights[i].denominator for i in block.edges))
    position_of = {}
    edges = []
    for position, edge_index in enumerate(block.edges):
        edge = graph.edges[edge_index]
        position_of[edge_index] = position
        edges.append((local[edge.u], local[edge.v], int(weights[edge_index] * scale)))
    return (block.order, edges, [position_of[e] for e in targets]), scale
