"""
Tests for the cycle engine
Enumeration, pruned heaviest-cycle search against brute force, Hamilton catalogs
"""

from fractions import Fraction
from math import comb, factorial

import pytest

from app.core.exceptions import CapExceededError, PreconditionError
from app.models.spec_models import RandomSpec, RunConfig
from app.services.cycle_engine import CycleEngine, two_opt_swap
from app.services.generators import gen_complete, gen_cycle, gen_random_connected, gen_tree
from app.services.graph_codec import parse_graph, unit_weights


class TestEnumeration:
    """Test suite for enumerate_cycles"""

    def test_triangle_and_tree(self, engine, uniform_triangle):
        """Test a triangle has one cycle and a tree none"""
        cycles = list(engine.enumerate_cycles(uniform_triangle))
        assert [c.vertices for c in cycles] == [(0, 1, 2)]
        assert cycles[0].weight == 3
        assert list(engine.enumerate_cycles(gen_tree(6, seed=1))) == []

    @pytest.mark.parametrize("r", [4, 5, 6])
    def test_complete_graph_counts(self, engine, r):
        """Test K_r has sum_k C(r, k) (k - 1)!/2 cycles, each once"""
        cycles = list(engine.enumerate_cycles(gen_complete(r)))
        expected = sum(comb(r, k) * factorial(k - 1) // 2 for k in range(3, r + 1))
        assert len(cycles) == expected
        assert len({c.vertices for c in cycles}) == expected

    def test_deterministic_order(self, engine):
        """Test two enumerations yield the same sequence"""
        graph = gen_random_connected(RandomSpec(n=7, m=12, seed=5))
        first = [c.vertices for c in engine.enumerate_cycles(graph)]
        assert first == [c.vertices for c in engine.enumerate_cycles(graph)]

    def test_cap_is_enforced(self):
        """Test enumeration beyond the cap is refused"""
        engine = CycleEngine(RunConfig(enumeration_cap=5))
        with pytest.raises(CapExceededError, match="enumeration_cap"):
            list(engine.enumerate_cycles(gen_cycle(6)))


class TestHeaviestCycleThrough:
    """Test suite for heaviest_cycle_through"""

    def test_uniform_triangle(self, engine, uniform_triangle):
        """Test every triangle edge has C_w = 3 with the triangle as witness"""
        for edge_index in range(3):
            c_w, witness = engine.heaviest_cycle_through(uniform_triangle, edge_index)
            assert c_w == 3
            assert witness.vertices == (0, 1, 2)

    def test_bridge_convention(self, engine, single_bridge):
        """Test a bridge returns 2 w(e) and no witness"""
        assert engine.heaviest_cycle_through(single_bridge, 0) == (Fraction(3), None)

    def test_tie_prefers_fewer_edges(self, engine):
        """Test a tied triangle beats a 4-cycle with the smaller vertex tuple"""
        graph = parse_graph("n 4\ne 0 1 1\ne 0 2 2\ne 0 3 1\ne 1 2 1\ne 2 3 1\n")
        c_w, witness = engine.heaviest_cycle_through(graph, graph.edge_index(0, 3))
        assert c_w == 4
        assert witness.vertices == (0, 2, 3)

    def test_heavy_c4(self, engine, heavy_c4):
        """Test every edge of C_4 (1,1,1,10) has C_w = 13"""
        for edge_index in range(4):
            c_w, witness = engine.heaviest_cycle_through(heavy_c4, edge_index)
            assert c_w == 13
            assert witness.vertices == (0, 1, 2, 3)

    def test_induced_k4(self, engine, induced_k4):
        """Test induced K_4 from (1,2,3,4) has C_w = 10 on every edge"""
        for edge_index in range(6):
            c_w, witness = engine.heaviest_cycle_through(induced_k4, edge_index)
            assert c_w == 10
            assert witness.length == 4

    def test_tie_break_is_canonically_smallest(self, engine, uniform_k4):
        """Test ties resolve to the smallest canonical Hamilton cycle"""
        _, witness = engine.heaviest_cycle_through(uniform_k4, uniform_k4.edge_index(2, 3))
        assert witness.vertices == (0, 1, 2, 3)

    def test_matches_brute_force(self, engine):
        """Test pruned search equals the enumeration maximum on every cycle edge"""
        for seed in range(30):
            n = 4 + seed % 5
            graph = gen_random_connected(RandomSpec(n=n, edge_probability=0.5, seed=seed))
            oracle = {}
            for cycle in engine.enumerate_cycles(graph):
                for u, v in cycle.edge_pairs():
                    i = graph.edge_index(u, v)
                    oracle[i] = max(oracle.get(i, Fraction(0)), cycle.weight)
            for profile in engine.local_profiles(graph):
                if profile.is_bridge:
                    assert profile.edge not in oracle
                else:
                    assert profile.c_w == oracle[profile.edge]
            assert engine.brute_force_c_w(graph) == oracle

    def test_every_cycle_is_dominated(self, engine):
        """Test C_w(e) >= w(C) for every cycle C and every edge of C"""
        graph = gen_random_connected(RandomSpec(n=7, m=13, seed=11))
        c_w = {p.edge: p.c_w for p in engine.local_profiles(graph)}
        for cycle in engine.enumerate_cycles(graph):
            for u, v in cycle.edge_pairs():
                assert c_w[graph.edge_index(u, v)] >= cycle.weight

    def test_witnesses_revalidate(self, engine):
        """Test every returned witness uses graph edges and has its exact weight"""
        graph = gen_random_connected(RandomSpec(n=8, m=16, seed=2))
        for profile in engine.local_profiles(graph):
            if profile.witness is not None:
                engine.check_witness(graph, profile.witness)

    def test_edge_index_out_of_range(self, engine, uniform_triangle):
        """Test invalid edge indices are rejected"""
        with pytest.raises(PreconditionError):
            engine.heaviest_cycle_through(uniform_triangle, 3)

    def test_search_cap_applies_per_block(self):
        """Test the search cap counts the vertices of the edge's block"""
        engine = CycleEngine(RunConfig(search_cap=4))
        with pytest.raises(CapExceededError, match="search_cap"):
            engine.heaviest_cycle_through(gen_cycle(5), 0)
        # a long path is fine: every block is a bridge
        assert engine.heaviest_cycle_through(gen_tree(30, seed=1), 0)[1] is None

    def test_parallel_matches_sequential(self, two_triangles, k4_bridge_triangle):
        """Test the process pool returns the same profiles as sequential execution"""
        sequential = CycleEngine(RunConfig(max_workers=1))
        parallel = CycleEngine(RunConfig(max_workers=2))
        for graph in (two_triangles, k4_bridge_triangle):
            assert parallel.local_profiles(graph) == sequential.local_profiles(graph)
        assert parallel.performance_metrics['parallel_batches'] == 2


class TestHeaviestAndLongestCycle:
    """Test suite for heaviest_cycle and longest_cycle_through"""

    def test_forest_has_no_cycle(self, engine):
        """Test a forest reports absence"""
        assert engine.heaviest_cycle(gen_tree(5, seed=0)) == (None, None)

    def test_uniform_k4_and_heavy_c4(self, engine, uniform_k4, heavy_c4):
        """Test maximum cycle weights"""
        weight, witness = engine.heaviest_cycle(uniform_k4)
        assert weight == 4 and witness.vertices == (0, 1, 2, 3)
        assert engine.heaviest_cycle(heavy_c4)[0] == 13

    def test_heaviest_cycle_under_weighting(self, engine, uniform_k4):
        """Test a weighting with zeros picks the cycle through both weighted edges"""
        weighting = [Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(1)]
        weight, witness = engine.heaviest_cycle_under(uniform_k4, weighting)
        assert weight == 2
        assert witness.vertices == (0, 1, 2, 3)
        assert engine.heaviest_cycle_under(gen_tree(4, seed=1), [Fraction(0)] * 3) == (None, None)

    def test_heaviest_cycle_under_rejects_bad_weighting(self, engine, uniform_k4):
        """Test negative entries and a wrong length are rejected"""
        with pytest.raises(PreconditionError):
            engine.heaviest_cycle_under(uniform_k4, [Fraction(-1)] + [Fraction(1)] * 5)
        with pytest.raises(PreconditionError):
            engine.heaviest_cycle_under(uniform_k4, [Fraction(1)] * 5)

    def test_longest_cycle_through(self, engine, single_bridge, uniform_k4, uniform_c5):
        """Test c(e) for a bridge, K_4 and C_5"""
        assert engine.longest_cycle_through(single_bridge, 0) == 2
        assert engine.longest_cycle_through(uniform_k4, 0) == 4
        assert engine.longest_cycle_through(uniform_c5, 2) == 5

    def test_longest_ignores_weights(self, engine, heavy_c4):
        """Test c(e) is the unit-weight specialisation"""
        assert engine.longest_cycle_through(heavy_c4, 1) == 4
        assert engine.heaviest_cycle_through(unit_weights(heavy_c4), 1)[0] == 4


class TestHamiltonCatalog:
    """Test suite for Hamilton cycles of K_r"""

    @pytest.mark.parametrize("r,count,incidence", [
        (3, 1, 1), (4, 3, 2), (5, 12, 6), (6, 60, 24), (7, 360, 120), (8, 2520, 720),
    ])
    def test_counts(self, engine, r, count, incidence):
        """Test (r-1)!/2 cycles and uniform incidence (r-2)!"""
        catalog = engine.hamilton_catalog(r)
        assert catalog.size == count
        assert set(catalog.incidence.values()) == {incidence}
        assert len(catalog.incidence) == comb(r, 2)

    def test_fractional_cover(self, engine):
        """Test (1/(r-2)!) times the incidence is 1 on every edge"""
        for r in range(3, 8):
            catalog = engine.hamilton_catalog(r)
            assert all(Fraction(c, factorial(r - 2)) == 1 for c in catalog.incidence.values())

    def test_r4_cycles(self, engine):
        """Test the three Hamilton 4-cycles explicitly"""
        assert [c.vertices for c in engine.hamilton_catalog(4).cycles] == [
            (0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3),
        ]

    @pytest.mark.parametrize("r", [2, 9])
    def test_out_of_range(self, engine, r):
        """Test r outside [3, 8] is rejected"""
        with pytest.raises(PreconditionError):
            engine.hamilton_catalog(r)

    @pytest.mark.parametrize("r,nodes", [(4, 3), (5, 12), (6, 60)])
    def test_two_opt_meta_graph_connected(self, engine, r, nodes):
        """Test Hamilton cycles sharing an edge form a connected meta-graph"""
        meta = engine.two_opt_graph_connected(r)
        assert meta.node_count == nodes
        assert meta.connected and meta.component_count == 1

    def test_two_opt_range(self, engine):
        """Test the meta-graph needs 4 <= r <= 7"""
        with pytest.raises(PreconditionError):
            engine.two_opt_graph_connected(3)

    def test_order_limits_come_from_config(self):
        """Test the catalog and meta-graph limits follow the run configuration"""
        engine = CycleEngine(RunConfig(hamilton_max_order=5, two_opt_max_order=4))
        assert engine.hamilton_catalog(5).size == 12
        with pytest.raises(PreconditionError):
            engine.hamilton_catalog(6)
        assert engine.two_opt_graph_connected(4).connected
        with pytest.raises(PreconditionError):
            engine.two_opt_graph_connected(5)

    @pytest.mark.parametrize("r", [4, 5, 6])
    def test_transpositions_share_an_edge(self, engine, r):
        """Test swapping consecutive vertices keeps at least one edge"""
        assert engine.transposition_moves_share_edge(r)

    def test_two_opt_swap(self):
        """Test the 2-opt move replaces ux, vy by uv, xy"""
        assert two_opt_swap((0, 1, 2, 3, 4), 0, 2) == (0, 2, 1, 3, 4)
        with pytest.raises(PreconditionError):
            two_opt_swap((0, 1, 2, 3), 0, 1)
        with pytest.raises(PreconditionError):
            two_opt_swap((0, 1, 2, 3), 0, 3)
