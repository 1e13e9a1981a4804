"""
Inequality Verification Service
The weighted local cycle inequality, its per-component form, the classical
cycle-length bounds and the threshold / light-edge corollaries
"""

import time
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from ..core.config import settings
from ..core.exceptions import CounterexampleError, InvariantViolation, PreconditionError
from ..core.logger import LoggerMixin
from ..models.analysis_models import BlockDecomposition, BridgeSet, LocalProfile
from ..models.graph_models import WeightedGraph
from ..models.report_models import (
    BondyFanCheck,
    ComponentPhi,
    CyclePhiCheck,
    ErdosGallaiCheck,
    GapVerdict,
    InequalityReport,
    LightEdgeForest,
    SpecializationCheck,
    ThresholdCheck,
    UnweightedChainCheck,
)
from ..models.spec_models import ArithmeticMode, RunConfig
from .cycle_engine import CycleEngine
from .decomposition import (
    block_decomposition,
    connected_components,
    find_bridges,
    is_block_graph,
    two_edge_components,
)
from .graph_codec import serialize_graph, total_weight, unit_weights

Weighting = Union[Mapping[int, Fraction], Sequence[Fraction]]


def classify_gap(
    gap: Fraction,
    mode: ArithmeticMode = ArithmeticMode.EXACT,
    tolerance: float = 1e-9,
) -> GapVerdict:
    """Exact mode compares with zero; float mode never claims equality"""
    if ArithmeticMode(mode) is ArithmeticMode.FLOAT:
        return GapVerdict.NUMERICALLY_TIGHT if abs(float(gap)) < tolerance else GapVerdict.STRICT
    return GapVerdict.EQUALITY if gap == 0 else GapVerdict.STRICT


class InequalityVerifier(LoggerMixin):
    """Checks sum_e w(e)/C_w(e) <= (n-1)/2 and its corollaries on concrete instances"""

    def __init__(self, engine: Optional[CycleEngine] = None, config: Optional[RunConfig] = None):
        super().__init__()
        self.config = config or RunConfig.from_settings(settings)
        self.engine = engine or CycleEngine(self.config)
        self.performance_metrics = {
            'reports': 0,
            'equalities': 0,
            'min_gap': None,
        }

    def verdict(self, report: InequalityReport) -> GapVerdict:
        return classify_gap(report.gap, self.config.mode, self.config.float_tolerance)

    def phi_weighting(
        self, graph: WeightedGraph, profiles: Optional[Tuple[LocalProfile, ...]] = None
    ) -> Dict[int, Fraction]:
        """phi(e) = w(e)/C_w(e); bridges map to 1/2"""
        profiles = profiles or self.engine.local_profiles(graph)
        return {profile.edge: profile.phi for profile in profiles}

    def verify_main(
        self, graph: WeightedGraph, blocks: Optional[BlockDecomposition] = None
    ) -> InequalityReport:
        """Full report; a negative gap or component excess raises CounterexampleError"""
        start_time = time.time()
        blocks = blocks or block_decomposition(graph)
        profiles = self.engine.local_profiles(graph, blocks)

        bridges = BridgeSet(bridges=tuple(p.edge for p in profiles if p.is_bridge))
        decomposition = two_edge_components(graph, bridges)
        component_count = len(connected_components(graph))

        local_sum = sum((p.phi for p in profiles), Fraction(0))
        bound = Fraction(graph.n - component_count, 2)
        gap = bound - local_sum

        subtotals = [Fraction(0)] * decomposition.k
        edge_counts = [0] * decomposition.k
        for profile in profiles:
            if profile.is_bridge:
                continue
            position = decomposition.component_of[profile.u]
            subtotals[position] += profile.phi
            edge_counts[position] += 1

        per_component = []
        for vertices, subtotal, count in zip(decomposition.components, subtotals, edge_counts):
            component = ComponentPhi(
                vertices=vertices, edge_count=count,
                phi_subtotal=subtotal, bound=Fraction(len(vertices) - 1, 2),
            )
            if not component.holds:
                self._counterexample(
                    graph, f"component {vertices}: phi(H) = {subtotal} > {component.bound}"
                )
            per_component.append(component)

        # assembly: sum phi(H_i) + |B|/2 and sum (n_i - 1) + |B| = n - c
        if local_sum != sum(subtotals, Fraction(0)) + Fraction(len(bridges), 2):
            raise InvariantViolation("local sum differs from component subtotals plus |B|/2")
        if sum(len(c) - 1 for c in decomposition.components) + len(bridges) != graph.n - component_count:
            raise InvariantViolation("component orders do not assemble to n - c")

        if gap < 0:
            self._counterexample(graph, f"local sum {local_sum} exceeds the bound {bound}")

        report = InequalityReport(
            n=graph.n, m=graph.m,
            connected=component_count == 1,
            connected_component_count=component_count,
            local_sum=local_sum, bound=bound, gap=gap, is_equality=gap == 0,
            bridge_count=len(bridges),
            profiles=profiles,
            per_component=tuple(per_component),
        )

        self.performance_metrics['reports'] += 1
        if report.is_equality:
            self.performance_metrics['equalities'] += 1
        current_min = self.performance_metrics['min_gap']
        if current_min is None or gap < current_min:
            self.performance_metrics['min_gap'] = gap
        self.log_performance(f"verify_main(n={graph.n}, m={graph.m})", time.time() - start_time)
        return report

    def verify_cycle_phi_bound(
        self, graph: WeightedGraph, profiles: Optional[Tuple[LocalProfile, ...]] = None
    ) -> CyclePhiCheck:
        """phi(C) <= 1 for every simple cycle, by enumeration"""
        blocks = block_decomposition(graph)
        phi = self.phi_weighting(graph, profiles or self.engine.local_profiles(graph, blocks))

        checked = 0
        max_phi = None
        max_cycle = None
        for cycle in self.engine.enumerate_block_cycles(graph, blocks):
            checked += 1
            value = sum((phi[graph.edge_index(u, v)] for u, v in cycle.edge_pairs()), Fraction(0))
            if value > 1:
                self._counterexample(graph, f"cycle {cycle.vertices} has phi(C) = {value} > 1")
            if max_phi is None or value > max_phi:
                max_phi, max_cycle = value, cycle

        return CyclePhiCheck(
            holds=True, cycles_checked=checked, max_phi=max_phi, max_phi_cycle=max_cycle
        )

    def _require_two_edge_connected(self, graph: WeightedGraph, operation: str) -> None:
        if graph.n < 3 or len(connected_components(graph)) != 1 or len(find_bridges(graph)):
            raise PreconditionError(f"{operation} needs a 2-edge-connected graph on at least 3 vertices")

    def verify_bondy_fan(self, graph: WeightedGraph, weighting: Weighting) -> BondyFanCheck:
        """A cycle of weighting-weight at least 2 * total / (n - 1); zero entries allowed"""
        self._require_two_edge_connected(graph, "verify_bondy_fan")
        try:
            values = [Fraction(weighting[i]) for i in range(graph.m)]
        except (KeyError, IndexError):
            raise PreconditionError(f"weighting does not cover all {graph.m} edges") from None
        heaviest, witness = self.engine.heaviest_cycle_under(graph, values)
        total = sum(values, Fraction(0))
        required = 2 * total / (graph.n - 1)
        return BondyFanCheck(
            holds=heaviest >= required, total=total, required=required, witness=witness
        )

    def verify_erdos_gallai(self, graph: WeightedGraph) -> ErdosGallaiCheck:
        """A cycle of length at least 2m / (n - 1)"""
        self._require_two_edge_connected(graph, "verify_erdos_gallai")
        longest, witness = self.engine.heaviest_cycle(unit_weights(graph))
        required = Fraction(2 * graph.m, graph.n - 1)
        return ErdosGallaiCheck(
            holds=longest >= required, longest_length=int(longest),
            required=required, witness=witness,
        )

    def threshold_mass(
        self,
        graph: WeightedGraph,
        threshold: Fraction,
        profiles: Optional[Tuple[LocalProfile, ...]] = None,
    ) -> ThresholdCheck:
        """Mass of edges with C_w(e) <= T against T (n - c) / 2, plus the complement form"""
        threshold = Fraction(threshold)
        if threshold <= 0:
            raise PreconditionError(f"threshold must be positive, got {threshold}")
        profiles = profiles or self.engine.local_profiles(graph)
        component_count = len(connected_components(graph))

        light_mass = sum((p.weight for p in profiles if p.c_w <= threshold), Fraction(0))
        heavy_mass = sum((p.weight for p in profiles if p.c_w > threshold), Fraction(0))
        bound = threshold * (graph.n - component_count) / 2
        weight = total_weight(graph)
        check = ThresholdCheck(
            threshold=threshold, light_mass=light_mass, bound=bound,
            heavy_mass=heavy_mass, complement_bound=weight - bound, total_weight=weight,
        )
        if not check.holds:
            self._counterexample(
                graph, f"threshold {threshold}: light mass {light_mass} exceeds {bound}"
            )
        return check

    def light_edge_forest(
        self, graph: WeightedGraph, profiles: Optional[Tuple[LocalProfile, ...]] = None
    ) -> LightEdgeForest:
        """F = {e : C_w(e) < 2 w(e)} must be acyclic"""
        profiles = profiles or self.engine.local_profiles(graph)
        light = tuple(p.edge for p in profiles if p.c_w < 2 * p.weight)

        acyclic = True
        if light:
            forest = nx.Graph()
            forest.add_edges_from(graph.edges[i].endpoints for i in light)
            acyclic = nx.is_forest(forest)
        if not acyclic:
            self._counterexample(graph, f"light edges {light} contain a cycle")

        return LightEdgeForest(edges=light, acyclic=acyclic, limit=max(graph.n - 1, 0))

    def verify_unweighted_chain(self, graph: WeightedGraph) -> UnweightedChainCheck:
        """e(G)/L <= sum 1/c(e) <= (n - 1)/2 with unit weights on a bridgeless graph"""
        self._require_two_edge_connected(graph, "verify_unweighted_chain")
        profiles = self.engine.local_profiles(unit_weights(graph))
        longest = int(max(p.c_w for p in profiles))
        check = UnweightedChainCheck(
            edge_count=graph.m,
            longest_cycle=longest,
            lower=Fraction(graph.m, longest),
            local_sum=sum((p.phi for p in profiles), Fraction(0)),
            bound=Fraction(graph.n - 1, 2),
        )
        if not check.holds:
            self._counterexample(
                unit_weights(graph),
                f"chain {check.lower} <= {check.local_sum} <= {check.bound} fails",
            )
        return check

    def verify_unit_weight_specialization(self, graph: WeightedGraph) -> SpecializationCheck:
        """With w = 1, equality exactly when every block is a clique"""
        report = self.verify_main(unit_weights(graph))
        block_check = is_block_graph(graph)
        return SpecializationCheck(
            is_equality=report.is_equality,
            is_block_graph=block_check.offending_block is None,
        )

    def _counterexample(self, graph: WeightedGraph, message: str) -> None:
        error = CounterexampleError(message, serialize_graph(graph))
        self.log_error_with_context(error, f"counterexample search on n={graph.n}, m={graph.m}")
        raise error
