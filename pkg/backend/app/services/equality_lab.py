"""
Equality Lab Service
Vertex-induced weight recovery, induced-clique equality, equality
certificates for block graphs and the K_r characterization
"""

import random
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.exceptions import (
    CapExceededError,
    CounterexampleError,
    InvariantViolation,
    PreconditionError,
)
from ..core.logger import LoggerMixin
from ..models.analysis_models import BlockDecomposition, BridgeSet, CycleWitness
from ..models.graph_models import WeightedGraph
from ..models.report_models import (
    BlockCertificate,
    BlockStatus,
    CertificateRoute,
    ComponentConditions,
    EqualityCertificate,
    EqualityStatus,
    HamiltonInducedCheck,
    InducedSolution,
    InequalityReport,
    KrCharacterization,
    NecessaryConditionsReport,
)
from ..models.spec_models import RunConfig
from .cycle_engine import CycleEngine
from .decomposition import block_decomposition, block_order, is_block_graph, two_edge_components
from .generators import gen_induced_clique
from .graph_codec import serialize_graph, total_weight
from .inequality_verifier import InequalityVerifier

CliqueWeights = Mapping[Tuple[int, int], Fraction]


def solve_linear_exact(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Optional[List[Fraction]]:
    """Gaussian elimination over the rationals.

    Returns one solution (free variables set to 0) or None when the system is
    inconsistent. Inputs are not modified.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    t = [Fraction(x) for x in rhs]
    if len(rows) != len(t):
        raise PreconditionError("matrix and right-hand side differ in length")
    if not rows:
        return []
    n_rows, n_cols = len(rows), len(rows[0])

    pivots = []
    piv_r = 0
    for piv_c in range(n_cols):
        pivot_row = next((i for i in range(piv_r, n_rows) if rows[i][piv_c] != 0), None)
        if pivot_row is None:
            continue
        rows[piv_r], rows[pivot_row] = rows[pivot_row], rows[piv_r]
        t[piv_r], t[pivot_row] = t[pivot_row], t[piv_r]
        fp = rows[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = rows[r][piv_c]
            if fr == 0:
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                rows[r][c] -= rows[piv_r][c] * frp
            t[r] -= t[piv_r] * frp
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == n_rows:
            break

    if any(t[r] != 0 for r in range(piv_r, n_rows)):
        return None

    solution = [Fraction(0)] * n_cols
    for r in range(len(pivots) - 1, -1, -1):
        piv_c = pivots[r]
        s = t[r] - sum((rows[r][c] * solution[c] for c in range(piv_c + 1, n_cols)), Fraction(0))
        solution[piv_c] = s / rows[r][piv_c]
    return solution


def clique_weights(graph: WeightedGraph, vertices: Optional[Sequence[int]] = None) -> Dict[Tuple[int, int], Fraction]:
    """Weights of the clique on vertices, keyed by local pairs (i, j), i < j"""
    vertices = list(range(graph.n)) if vertices is None else sorted(vertices)
    weights = {}
    for i, j in combinations(range(len(vertices)), 2):
        index = graph.edge_index(vertices[i], vertices[j])
        if index is None:
            raise PreconditionError(f"{vertices[i]}-{vertices[j]} is not an edge; not a clique")
        weights[(i, j)] = graph.edges[index].weight
    return weights


def _weight(weights: CliqueWeights, u: int, v: int) -> Fraction:
    try:
        return weights[(u, v) if u < v else (v, u)]
    except KeyError:
        raise PreconditionError(f"missing clique weight for {u}-{v}") from None


def _induced_system(r: int, weights: CliqueWeights) -> Tuple[List[List[int]], List[Fraction]]:
    """a(u) + a(v) = 2 w(uv) for every pair"""
    matrix, rhs = [], []
    for u, v in combinations(range(r), 2):
        row = [0] * r
        row[u] = row[v] = 1
        matrix.append(row)
        rhs.append(2 * _weight(weights, u, v))
    return matrix, rhs


def solve_vertex_induced(
    weights: CliqueWeights,
    r: int,
    vertices: Optional[Sequence[int]] = None,
    allow_signed: bool = False,
) -> Optional[InducedSolution]:
    """Recover a with w(uv) = (a(u) + a(v)) / 2 on K_r, or None if no such a exists.

    For r >= 4 the values come from the basis x = 0, y = 1 and are then checked
    on every edge; triangles are solved directly (always solvable).
    With `allow_signed` the weights may be zero or negative.
    """
    if r < 3:
        raise PreconditionError(f"vertex-induced recovery needs r >= 3, got {r}")
    for u, v in combinations(range(r), 2):
        if _weight(weights, u, v) <= 0 and not allow_signed:
            raise PreconditionError(f"clique weight on {u}-{v} is not positive")
    vertices = tuple(range(r)) if vertices is None else tuple(vertices)

    if r == 3:
        a = solve_linear_exact(*_induced_system(3, weights))
    else:
        x, y = 0, 1
        a = [Fraction(0)] * r
        for t in range(2, r):
            a[t] = _weight(weights, t, x) + _weight(weights, t, y) - _weight(weights, x, y)
        a[x] = 2 * _weight(weights, x, 2) - a[2]
        a[y] = 2 * _weight(weights, y, 2) - a[2]
        if any(
            2 * _weight(weights, u, v) != a[u] + a[v] for u, v in combinations(range(r), 2)
        ):
            return None

    return InducedSolution(
        vertices=vertices, a=tuple(a), all_nonnegative=all(value >= 0 for value in a)
    )


class EqualityLab(LoggerMixin):
    """Certifies and diagnoses equality instances"""

    def __init__(
        self,
        verifier: Optional[InequalityVerifier] = None,
        config: Optional[RunConfig] = None,
    ):
        super().__init__()
        self.config = config or RunConfig.from_settings(settings)
        self.verifier = verifier or InequalityVerifier(config=self.config)
        self.engine: CycleEngine = self.verifier.engine
        self.characterization_max_order = self.config.characterization_max_order

    def verify_induced_clique_equality(self, r: int, a: Sequence) -> InequalityReport:
        """Induced K_r: C_w(e) = sum a on every edge and the sum hits (r - 1)/2"""
        if r < 4:
            raise PreconditionError(f"induced clique equality is stated for r >= 4, got {r}")
        graph = gen_induced_clique(r, a)
        big_a = sum((Fraction(value) for value in a), Fraction(0))
        report = self.verifier.verify_main(graph)

        off = [p.edge for p in report.profiles if p.c_w != big_a]
        if off:
            raise InvariantViolation(f"C_w differs from A = {big_a} on edges {off}")
        if report.local_sum != Fraction(r - 1, 2):
            raise InvariantViolation(f"induced K_{r} sums to {report.local_sum}, not {Fraction(r - 1, 2)}")
        if total_weight(graph) != Fraction(r - 1, 2) * big_a:
            raise InvariantViolation(f"w(K_{r}) != (r - 1)/2 * A")
        return report

    def necessary_conditions(
        self,
        graph: WeightedGraph,
        report: InequalityReport,
        blocks: Optional[BlockDecomposition] = None,
    ) -> NecessaryConditionsReport:
        """Per bridgeless component: phi(H) = (n_H - 1)/2, a cycle with phi(C) = 1, termwise tightness"""
        blocks = blocks or block_decomposition(graph)
        phi = report.phi
        c_w = {profile.edge: profile.c_w for profile in report.profiles}
        decomposition = two_edge_components(graph, _bridges_of(report))

        tight: Dict[int, CycleWitness] = {}
        for cycle in self.engine.enumerate_block_cycles(graph, blocks):
            position = decomposition.component_of[cycle.vertices[0]]
            if position in tight:
                continue
            indices = [graph.edge_index(u, v) for u, v in cycle.edge_pairs()]
            if sum((phi[i] for i in indices), Fraction(0)) == 1:
                tight[position] = cycle

        components = []
        for position, component in enumerate(report.per_component):
            if component.edge_count == 0:
                continue
            cycle = tight.get(position)
            termwise = cycle is not None and all(
                c_w[graph.edge_index(u, v)] == cycle.weight for u, v in cycle.edge_pairs()
            )
            components.append(ComponentConditions(
                vertices=component.vertices,
                phi_subtotal_equals_bound=component.is_tight,
                tight_cycle=cycle,
                tight_cycle_phi=Fraction(1) if cycle is not None else None,
                termwise_tight=termwise,
            ))
        return NecessaryConditionsReport(components=tuple(components))

    def certify_equality(
        self, graph: WeightedGraph, report: Optional[InequalityReport] = None
    ) -> EqualityCertificate:
        blocks = block_decomposition(graph)
        report = report or self.verifier.verify_main(graph, blocks)
        block_check = is_block_graph(graph, blocks)
        diagnostics = self.necessary_conditions(graph, report, blocks)

        if not report.is_equality:
            return EqualityCertificate(
                status=EqualityStatus.STRICT, gap=report.gap,
                is_block_graph=block_check.is_block_graph, diagnostics=diagnostics,
            )

        if not diagnostics.all_hold:
            failing = [c.vertices for c in diagnostics.components if not c.all_hold]
            raise CounterexampleError(
                f"equality instance violates the necessary conditions on {failing}",
                serialize_graph(graph),
            )

        if block_check.offending_block is not None:
            self.logger.warning(
                f"Equality on a graph with non-clique block {block_check.offending_block.vertices}"
            )
            return EqualityCertificate(
                status=EqualityStatus.EQUALITY, route=CertificateRoute.OTHER, gap=report.gap,
                is_block_graph=False, diagnostics=diagnostics,
            )

        ordered = block_order(graph, blocks) if block_check.connected else list(blocks.blocks)
        phi = report.phi
        per_block = []
        for block in ordered:
            subtotal = sum((phi[i] for i in block.edges), Fraction(0))
            bound = Fraction(block.order - 1, 2)
            if subtotal != bound:
                raise InvariantViolation(
                    f"block {block.vertices}: phi(B) = {subtotal} != {bound} in an equality instance"
                )
            if block.order <= 3:
                per_block.append(BlockCertificate(
                    vertices=block.vertices, status=BlockStatus.UNCONSTRAINED,
                    phi_subtotal=subtotal, bound=bound,
                ))
                continue
            solution = solve_vertex_induced(
                clique_weights(graph, block.vertices), block.order, block.vertices
            )
            if solution is None or not solution.all_nonnegative:
                raise CounterexampleError(
                    f"equality block {block.vertices} carries no nonnegative vertex-induced weighting",
                    serialize_graph(graph),
                )
            per_block.append(BlockCertificate(
                vertices=block.vertices, status=BlockStatus.INDUCED, solution=solution,
                phi_subtotal=subtotal, bound=bound,
            ))

        return EqualityCertificate(
            status=EqualityStatus.EQUALITY, route=CertificateRoute.BLOCK_GRAPH_INDUCED,
            gap=report.gap, is_block_graph=block_check.is_block_graph,
            per_block=tuple(per_block), diagnostics=diagnostics,
        )

    def verify_k_r_characterization(self, graph: WeightedGraph) -> KrCharacterization:
        """On K_r: equality iff w is vertex-induced with a >= 0"""
        r = graph.n
        if not graph.is_complete():
            raise PreconditionError("K_r characterization needs a complete graph")
        if r < 4:
            raise PreconditionError(f"K_r characterization is stated for r >= 4, got {r}")
        if r > self.characterization_max_order:
            raise CapExceededError("characterization_max_order", self.characterization_max_order, r)

        report = self.verifier.verify_main(graph)
        weights = clique_weights(graph)
        solution = solve_vertex_induced(weights, r)

        matrix, rhs = _induced_system(r, weights)
        cross_check = solve_linear_exact(matrix, rhs)
        if (cross_check is None) != (solution is None) or (
            solution is not None and tuple(cross_check) != solution.a
        ):
            raise InvariantViolation("recovery formula and elimination disagree")

        induced = solution is not None and solution.all_nonnegative
        common_c_w = phi_induced = hamilton_all_one = None
        if report.is_equality:
            values = {p.c_w for p in report.profiles}
            if len(values) != 1:
                raise InvariantViolation(f"equality K_{r} has several C_w values {sorted(values)}")
            common_c_w = values.pop()
            phi_weights = {
                (p.u, p.v): p.phi for p in report.profiles
            }
            phi_induced = solve_vertex_induced(phi_weights, r) is not None
            catalog = self.engine.hamilton_catalog(r)
            hamilton_all_one = all(
                sum((phi_weights[pair] for pair in cycle.edge_pairs()), Fraction(0)) == 1
                for cycle in catalog.cycles
            )
            if not (phi_induced and hamilton_all_one):
                raise InvariantViolation(f"equality K_{r}: phi is not an induced Hamilton-tight weighting")
            if induced and common_c_w != solution.total:
                raise InvariantViolation(f"common C_w {common_c_w} differs from sum a = {solution.total}")

        result = KrCharacterization(
            r=r, is_equality=report.is_equality, induced=induced, solution=solution,
            common_c_w=common_c_w, phi_induced=phi_induced, hamilton_phi_all_one=hamilton_all_one,
        )
        if not result.consistent:
            raise CounterexampleError(
                f"K_{r}: equality={result.is_equality} but induced={result.induced}",
                serialize_graph(graph),
            )
        return result

    def verify_hamilton_equal_weight_implies_induced(
        self, r: int, weights: CliqueWeights, seed: int = 0, samples: int = 20
    ) -> HamiltonInducedCheck:
        """Equal Hamilton weights force an induced (possibly signed) weighting"""
        if not 4 <= r <= self.characterization_max_order:
            raise PreconditionError(
                f"Hamilton weight check needs 4 <= r <= {self.characterization_max_order}, got {r}"
            )
        catalog = self.engine.hamilton_catalog(r)
        totals = {
            sum((_weight(weights, u, v) for u, v in cycle.edge_pairs()), Fraction(0))
            for cycle in catalog.cycles
        }
        if len(totals) != 1:
            return HamiltonInducedCheck(r=r, equal_hamilton_weights=False)

        solution = solve_vertex_induced(weights, r, allow_signed=True)
        if solution is None:
            raise InvariantViolation(f"K_{r}: equal Hamilton weights but no induced solution")

        # 2-opt exchange: w(uv) + w(xy) = w(ux) + w(vy) on any four distinct vertices
        rng = random.Random(seed)
        for _ in range(samples):
            u, v, x, y = rng.sample(range(r), 4)
            if _weight(weights, u, v) + _weight(weights, x, y) != _weight(weights, u, x) + _weight(weights, v, y):
                raise InvariantViolation(f"exchange identity fails on ({u}, {v}, {x}, {y})")

        return HamiltonInducedCheck(
            r=r, equal_hamilton_weights=True, hamilton_weight=totals.pop(),
            solution=solution, exchange_checks=samples,
        )


def _bridges_of(report: InequalityReport) -> BridgeSet:
    return BridgeSet(bridges=tuple(p.edge for p in report.profiles if p.is_bridge))
