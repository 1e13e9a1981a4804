"""
Instance Generators
Extremal families (trees, induced cliques, block graphs), curated small
graphs and seeded random connected instances
"""

import random
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from ..core.exceptions import GraphValidationError
from ..models.graph_models import Edge, WeightedGraph, parse_rational
from ..models.spec_models import (
    BlockGraphSpec,
    BlockSpec,
    ExplicitWeights,
    InducedWeights,
    RandomSpec,
    UniformWeights,
)
from .graph_codec import with_weights


def random_rational(rng: random.Random, numerator_max: int = 100, denominator_max: int = 10) -> Fraction:
    """Positive p/q with p in [1, numerator_max], q in [1, denominator_max]"""
    return Fraction(rng.randint(1, numerator_max), rng.randint(1, denominator_max))


def _graph(n: int, edges: Sequence[Tuple[int, int, Fraction]]) -> WeightedGraph:
    return WeightedGraph(n=n, edges=tuple(Edge(u=u, v=v, weight=w) for u, v, w in edges))


def gen_tree(n: int, seed: int = 0) -> WeightedGraph:
    """Random labelled tree (uniform via a Pruefer sequence) with random rational weights"""
    if n < 1:
        raise GraphValidationError(f"a tree needs at least one vertex, got n={n}")
    rng = random.Random(seed)
    if n == 1:
        return WeightedGraph(n=1)
    if n == 2:
        pairs = [(0, 1)]
    else:
        tree = nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])
        pairs = sorted(tuple(sorted(edge)) for edge in tree.edges())
    return _graph(n, [(u, v, random_rational(rng)) for u, v in pairs])


def gen_induced_clique(r: int, a: Sequence) -> WeightedGraph:
    """K_r with w(uv) = (a(u) + a(v)) / 2"""
    if r < 3:
        raise GraphValidationError(f"induced cliques need r >= 3, got {r}")
    values = [parse_rational(value) for value in a]
    if len(values) != r:
        raise GraphValidationError(f"need {r} vertex values, got {len(values)}")
    if any(value < 0 for value in values):
        raise GraphValidationError("vertex values must be nonnegative")
    edges = []
    for u, v in combinations(range(r), 2):
        weight = (values[u] + values[v]) / 2
        if weight <= 0:
            raise GraphValidationError(f"edge {u}-{v} would get weight {weight}")
        edges.append((u, v, weight))
    return _graph(r, edges)


def gen_complete(r: int, weight=1) -> WeightedGraph:
    """Uniformly weighted K_r"""
    if r < 1:
        raise GraphValidationError(f"complete graphs need r >= 1, got {r}")
    weight = parse_rational(weight)
    if weight <= 0:
        raise GraphValidationError("weight must be positive")
    return _graph(r, [(u, v, weight) for u, v in combinations(range(r), 2)])


def gen_cycle(n: int, weights: Optional[Sequence] = None) -> WeightedGraph:
    """C_n on 0..n-1; weights[i] goes on edge (i, i+1 mod n)"""
    if n < 3:
        raise GraphValidationError(f"cycles need n >= 3, got {n}")
    values = [Fraction(1)] * n if weights is None else [parse_rational(w) for w in weights]
    if len(values) != n:
        raise GraphValidationError(f"need {n} cycle weights, got {len(values)}")
    if any(value <= 0 for value in values):
        raise GraphValidationError("cycle weights must be positive")
    return _graph(n, [(i, (i + 1) % n, values[i]) for i in range(n)])


def gen_theta(path_lengths: Sequence[int], weight=1) -> WeightedGraph:
    """Terminals 0 and 1 joined by internally disjoint paths of the given lengths"""
    if len(path_lengths) < 2 or any(length < 1 for length in path_lengths):
        raise GraphValidationError("theta graphs need at least two paths of length >= 1")
    if sum(1 for length in path_lengths if length == 1) > 1:
        raise GraphValidationError("at most one path may be a direct edge")
    weight = parse_rational(weight)
    if weight <= 0:
        raise GraphValidationError("weight must be positive")

    edges = []
    next_vertex = 2
    for length in path_lengths:
        previous = 0
        for _ in range(length - 1):
            edges.append((previous, next_vertex, weight))
            previous = next_vertex
            next_vertex += 1
        edges.append((previous, 1, weight))
    return _graph(next_vertex, edges)


def _block_edge_weights(block: BlockSpec) -> List[Fraction]:
    """Weights in local pair order (0,1), (0,2), ..., (s-2, s-1)"""
    weighting = block.weighting
    pairs = list(combinations(range(block.size), 2))
    if isinstance(weighting, UniformWeights):
        return [weighting.weight] * len(pairs)
    if isinstance(weighting, InducedWeights):
        return [(weighting.a[u] + weighting.a[v]) / 2 for u, v in pairs]
    return list(weighting.weights)


def gen_block_graph(spec: BlockGraphSpec, seed: int = 0) -> WeightedGraph:
    """Glue blocks one at a time; each new block shares exactly one vertex with the graph so far.

    Local vertex 0 of block j is its attachment vertex; missing attachments are drawn from seed.
    """
    rng = random.Random(seed)
    first = spec.blocks[0]
    vertex_count = first.size
    edges = [
        (u, v, w)
        for (u, v), w in zip(combinations(range(first.size), 2), _block_edge_weights(first))
    ]

    attachments = spec.attachments or (None,) * (len(spec.blocks) - 1)
    for block, attachment in zip(spec.blocks[1:], attachments):
        if attachment is None:
            attachment = rng.randrange(vertex_count)
        elif not 0 <= attachment < vertex_count:
            raise GraphValidationError(f"attachment vertex {attachment} does not exist yet")
        members = [attachment] + list(range(vertex_count, vertex_count + block.size - 1))
        for (i, j), w in zip(combinations(range(block.size), 2), _block_edge_weights(block)):
            edges.append((members[i], members[j], w))
        vertex_count += block.size - 1

    return _graph(vertex_count, edges)


def gen_random_connected(spec: RandomSpec) -> WeightedGraph:
    """Random spanning tree first, then extra edges chosen uniformly; deterministic per seed"""
    n = spec.n
    max_edges = comb(n, 2)
    rng = random.Random(spec.seed)

    if spec.m is not None and not n - 1 <= spec.m <= max_edges:
        raise GraphValidationError(f"m={spec.m} is infeasible for a connected graph on {n} vertices")

    # random labelled spanning tree: each vertex of a shuffled order hooks onto an earlier one
    order = list(range(n))
    rng.shuffle(order)
    tree = set()
    for position in range(1, n):
        u, v = order[position], order[rng.randrange(position)]
        tree.add((min(u, v), max(u, v)))

    candidates = [pair for pair in combinations(range(n), 2) if pair not in tree]
    if spec.m is not None:
        extra = rng.sample(candidates, spec.m - (n - 1))
    elif spec.edge_probability is not None:
        extra = [pair for pair in candidates if rng.random() < spec.edge_probability]
    else:
        extra = rng.sample(candidates, rng.randint(0, len(candidates)))

    pairs = sorted(tree.union(extra))
    return _graph(n, [
        (u, v, random_rational(rng, spec.numerator_max, spec.denominator_max)) for u, v in pairs
    ])


def perturb_edge(graph: WeightedGraph, edge_index: int, delta) -> WeightedGraph:
    """Copy of graph with w(e) replaced by w(e) + delta"""
    if not 0 <= edge_index < graph.m:
        raise GraphValidationError(f"edge index {edge_index} out of range for m={graph.m}")
    delta = parse_rational(delta)
    weights = list(graph.weights)
    weights[edge_index] += delta
    if weights[edge_index] <= 0:
        raise GraphValidationError(
            f"perturbed weight {weights[edge_index]} on edge {edge_index} is not positive"
        )
    return with_weights(graph, weights)


def random_induced_vector(r: int, seed: int = 0, zero_probability: float = 0.2) -> Tuple[Fraction, ...]:
    """Nonnegative vertex values with at most one zero"""
    return _induced_vector(random.Random(seed), r, zero_probability)


def _induced_vector(rng: random.Random, r: int, zero_probability: float = 0.2) -> Tuple[Fraction, ...]:
    values = [random_rational(rng) for _ in range(r)]
    if r >= 2 and rng.random() < zero_probability:
        values[rng.randrange(r)] = Fraction(0)
    return tuple(values)


def random_block_graph_spec(max_blocks: int = 5, max_block_size: int = 5, seed: int = 0) -> BlockGraphSpec:
    """Random recipe whose every block follows the equality recipe"""
    if max_blocks < 1 or max_block_size < 2:
        raise GraphValidationError("need max_blocks >= 1 and max_block_size >= 2")
    rng = random.Random(seed)
    blocks = []
    for _ in range(rng.randint(1, max_blocks)):
        size = rng.randint(2, max_block_size)
        if size <= 3 and rng.random() < 0.5:
            weighting = ExplicitWeights(weights=tuple(random_rational(rng) for _ in range(comb(size, 2))))
        elif size >= 3 and rng.random() < 0.7:
            weighting = InducedWeights(a=_induced_vector(rng, size))
        else:
            weighting = UniformWeights(weight=random_rational(rng))
        blocks.append(BlockSpec(size=size, weighting=weighting))

    attachments = []
    vertex_count = blocks[0].size
    for block in blocks[1:]:
        attachments.append(rng.randrange(vertex_count))
        vertex_count += block.size - 1
    return BlockGraphSpec(blocks=tuple(blocks), attachments=tuple(attachments))
