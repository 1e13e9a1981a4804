"""
Tests for the cyclebound command-line interface
Output formats and exit codes
"""

import orjson
import pytest

from app.core.config import settings
from app.core.exceptions import CounterexampleError, InvariantViolation
from app.main import main
from app.services.generators import gen_tree
from app.services.graph_codec import parse_graph, serialize_graph


def _json(capsys):
    return orjson.loads(capsys.readouterr().out)


class TestVerifyCommand:
    """Test suite for `cyclebound verify`"""

    def test_text_report(self, capsys, write_graph, heavy_c4):
        """Test the text report lists sums and per-edge values"""
        assert main(["verify", str(write_graph(heavy_c4))]) == 0
        out = capsys.readouterr().out
        assert "local_sum = 1" in out
        assert "bound     = 3/2" in out
        assert "verdict   = strict" in out
        assert "0-3  w=10  C_w=13  phi=10/13" in out

    def test_json_report(self, capsys, write_graph, heavy_c4):
        """Test the JSON report uses p/q strings"""
        assert main(["verify", "--json", str(write_graph(heavy_c4))]) == 0
        payload = _json(capsys)
        assert payload["local_sum"] == "1"
        assert payload["gap"] == "1/2"
        assert payload["equality"] is False
        assert payload["edges"][1] == {
            "u": "0", "v": "3", "w": "10", "c_w": "13", "phi": "10/13", "bridge": False,
        }

    def test_flags_before_command(self, capsys, write_graph, uniform_k4):
        """Test run flags are accepted before the command name"""
        assert main(["--json", "verify", str(write_graph(uniform_k4))]) == 0
        payload = _json(capsys)
        assert payload["equality"] is True and payload["verdict"] == "equality"

    def test_float_mode(self, capsys, write_graph, uniform_k4):
        """Test float mode reports numerically tight, never equality"""
        assert main(["verify", "--mode", "float", "--json", str(write_graph(uniform_k4))]) == 0
        payload = _json(capsys)
        assert payload["verdict"] == "numerically tight"
        assert payload["equality"] is False
        assert payload["gap_float"] == 0.0

    def test_labels_and_disconnected(self, capsys, tmp_path):
        """Test non-integer labels are echoed and disconnected graphs use (n - c)/2"""
        path = tmp_path / "labels.txt"
        path.write_text("n 5\ne a b 1\ne b c 1\ne a c 1\ne x y 2\n", encoding="utf-8")
        assert main(["verify", "--json", str(path)]) == 0
        payload = _json(capsys)
        assert payload["connected"] is False
        assert payload["bound"] == "3/2"
        assert {(edge["u"], edge["v"]) for edge in payload["edges"]} == {
            ("a", "b"), ("a", "c"), ("b", "c"), ("x", "y"),
        }

    def test_byte_identical_reruns(self, capsys, write_graph, k4_bridge_triangle):
        """Test two runs print the same bytes"""
        path = str(write_graph(k4_bridge_triangle))
        main(["verify", "--json", path])
        first = capsys.readouterr().out
        main(["verify", "--json", path])
        assert capsys.readouterr().out == first

    @pytest.mark.parametrize("text", [
        "n 3\ne 0 1 abc\n",
        "e 0 1 1\n",
        "n 3\ne 0 1 1\ne 1 0 2\n",
        "n 3\ne 0 0 1\n",
        "n 3\ne 0 1 -1\n",
        "n 2\ne 0 5 1\n",
    ])
    def test_malformed_input(self, capsys, tmp_path, text):
        """Test malformed or invalid graphs exit with 2"""
        path = tmp_path / "bad.txt"
        path.write_text(text, encoding="utf-8")
        assert main(["verify", str(path)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        """Test an unreadable path exits with 2"""
        assert main(["verify", str(tmp_path / "absent.txt")]) == 2

    def test_search_cap(self, capsys, write_graph, uniform_c5):
        """Test a block above the search cap exits with 4"""
        assert main(["verify", "--search-cap", "4", str(write_graph(uniform_c5))]) == 4
        assert "search_cap" in capsys.readouterr().err

    def test_invalid_cap(self, write_graph, uniform_c5):
        """Test caps below 3 are a configuration error"""
        assert main(["verify", "--search-cap", "2", str(write_graph(uniform_c5))]) == 2

    def test_counterexample_exit_code(self, monkeypatch, write_graph, uniform_triangle):
        """Test a counterexample maps to exit code 3"""

        def fail(self, graph, blocks=None):
            raise CounterexampleError("forced", serialize_graph(graph))

        monkeypatch.setattr("app.main.InequalityVerifier.verify_main", fail)
        assert main(["verify", str(write_graph(uniform_triangle))]) == 3


class TestAnalyzeCommand:
    """Test suite for `cyclebound analyze`"""

    def test_json_thresholds(self, capsys, write_graph, heavy_c4):
        """Test threshold and light-forest fields on C_4 (1,1,1,10)"""
        assert main(["analyze", "--json", "--threshold", "13", str(write_graph(heavy_c4))]) == 0
        payload = _json(capsys)
        (threshold,) = payload["thresholds"]
        assert threshold["light_mass"] == "13"
        assert threshold["bound"] == "39/2"
        assert threshold["holds"] is True
        assert payload["light_edge_forest"]["edges"] == [["0", "3"]]
        assert payload["certificate"]["status"] == "Strict"
        assert payload["block_graph"] is False

    def test_text_block_graph(self, capsys, write_graph, two_triangles):
        """Test the text output for an equality block graph"""
        assert main(["analyze", str(write_graph(two_triangles))]) == 0
        out = capsys.readouterr().out
        assert "block graph: yes" in out
        assert "certificate: Equality (BlockGraphInduced)" in out
        assert "bridges: none" in out

    def test_json_certificate(self, capsys, write_graph, k4_bridge_triangle):
        """Test the certificate lists blocks in order with recovered vertex values"""
        assert main(["analyze", "--json", str(write_graph(k4_bridge_triangle))]) == 0
        payload = _json(capsys)
        assert payload["bridges"] == [["3", "4"]]
        assert payload["cut_vertices"] == ["3", "4"]
        blocks = payload["certificate"]["blocks"]
        assert blocks[0] == {
            "vertices": ["0", "1", "2", "3"], "status": "induced", "a": ["1", "2", "3", "4"], "phi": "3/2",
        }
        assert [block["status"] for block in blocks[1:]] == ["unconstrained", "unconstrained"]

    def test_float_mode_certificate(self, capsys, write_graph, uniform_k4):
        """Test float mode reports a tight certificate as numerically tight, never as equality"""
        path = str(write_graph(uniform_k4))
        assert main(["analyze", "--mode", "float", "--json", path]) == 0
        payload = _json(capsys)
        assert payload["report"]["verdict"] == "numerically tight"
        assert payload["certificate"]["status"] == "numerically tight"

        assert main(["analyze", "--mode", "float", path]) == 0
        out = capsys.readouterr().out
        assert "certificate: numerically tight" in out
        assert "Equality" not in out

    def test_exact_mode_certificate(self, capsys, write_graph, uniform_k4):
        """Test exact mode keeps the Equality status"""
        assert main(["analyze", "--json", str(write_graph(uniform_k4))]) == 0
        assert _json(capsys)["certificate"]["status"] == "Equality"

    @pytest.mark.parametrize("threshold", ["abc", "0"])
    def test_bad_threshold(self, write_graph, uniform_k4, threshold):
        """Test malformed or nonpositive thresholds exit with 2"""
        assert main(["analyze", "--threshold", threshold, str(write_graph(uniform_k4))]) == 2


class TestGenerateCommand:
    """Test suite for `cyclebound generate`"""

    def test_tree_matches_generator(self, capsys):
        """Test the printed tree is the seeded generator output"""
        assert main(["generate", "tree", "--n", "6", "--seed", "3"]) == 0
        assert capsys.readouterr().out == serialize_graph(gen_tree(6, seed=3))

    def test_induced_clique(self, capsys):
        """Test induced clique weights"""
        assert main(["generate", "induced-clique", "--r", "4", "--a", "1,2,3,4"]) == 0
        graph = parse_graph(capsys.readouterr().out)
        assert graph.weight(0, 3) == 2 and graph.m == 6

    @pytest.mark.parametrize("argv,n,m", [
        (["random", "--n", "6", "--m", "8"], 6, 8),
        (["random", "--n", "6", "--m", "15"], 6, 15),
        (["cycle", "--n", "4", "--weights", "1,1,1,10"], 4, 4),
        (["complete", "--r", "5", "--weight", "1/2"], 5, 10),
        (["theta"], 5, 6),
        (["theta", "--paths", "1,3,3"], 6, 7),
        (["block-graph", "--seed", "4"], None, None),
    ])
    def test_kinds(self, capsys, argv, n, m):
        """Test every generator kind prints a parseable graph"""
        assert main(["generate", *argv]) == 0
        graph = parse_graph(capsys.readouterr().out)
        if n is not None:
            assert (graph.n, graph.m) == (n, m)

    def test_block_graph_spec_file(self, capsys, tmp_path):
        """Test a JSON recipe file"""
        spec = tmp_path / "spec.json"
        spec.write_bytes(orjson.dumps({
            "blocks": [
                {"size": 4, "weighting": {"kind": "induced", "a": ["1", "2", "3", "4"]}},
                {"size": 3},
            ],
            "attachments": [2],
        }))
        assert main(["generate", "block-graph", "--spec", str(spec), "--json"]) == 0
        payload = _json(capsys)
        assert payload["n"] == 6
        assert [0, 1, "3/2"] in payload["edges"]

    @pytest.mark.parametrize("argv", [
        ["tree"],
        ["induced-clique", "--r", "4", "--a", "0,0,1,1"],
        ["induced-clique", "--r", "4", "--a", "1,x,3,4"],
        ["random", "--n", "5", "--m", "2"],
        ["cycle", "--n", "2"],
        ["block-graph", "--spec", "/nonexistent/spec.json"],
    ])
    def test_invalid_parameters(self, argv):
        """Test missing or infeasible generator parameters exit with 2"""
        assert main(["generate", *argv]) == 2


class TestFuzzCommand:
    """Test suite for `cyclebound fuzz`"""

    def test_small_campaign(self, capsys):
        """Test a short campaign passes every check"""
        assert main(["fuzz", "--n-max", "5", "--trials", "3", "--seed", "1", "--json"]) == 0
        summary = _json(capsys)
        assert summary["instances"] == 9
        assert set(summary["passed"].values()) == {9}
        assert summary["min_gap"] is not None

    def test_zero_trials(self, capsys):
        """Test an empty campaign succeeds"""
        assert main(["fuzz", "--trials", "0", "--json"]) == 0
        summary = _json(capsys)
        assert summary["instances"] == 0 and summary["min_gap"] is None

    def test_deterministic(self, capsys):
        """Test the same seed gives the same summary"""
        argv = ["fuzz", "--n-max", "5", "--trials", "2", "--seed", "42", "--json"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_cap_exceeded(self, capsys):
        """Test n_max above the enumeration cap exits with 4"""
        assert main(["fuzz", "--n-max", "20", "--trials", "1"]) == 4
        assert "enumeration_cap" in capsys.readouterr().err

    def test_failure_is_written(self, monkeypatch, tmp_path):
        """Test a failing instance is saved with its seed and the run exits with 3"""

        def fail(graph, verifier, rng, counts):
            raise InvariantViolation("forced failure")

        monkeypatch.setattr(settings, "fuzz_output_directory", str(tmp_path))
        monkeypatch.setattr("app.main._fuzz_instance", fail)
        assert main(["fuzz", "--n-max", "3", "--trials", "1", "--seed", "7"]) == 3
        saved = (tmp_path / "counterexample-seed7.txt").read_text(encoding="utf-8")
        assert saved.startswith("# forced failure\n")
        assert parse_graph(saved).n == 3


class TestHamiltonCommand:
    """Test suite for `cyclebound hamilton`"""

    def test_k5(self, capsys):
        """Test the catalog summary for K_5"""
        assert main(["hamilton", "--r", "5", "--json"]) == 0
        result = _json(capsys)
        assert result["cycles"] == 12 and result["expected_cycles"] == 12
        assert result["incidence"] == [6]
        assert result["two_opt"] == {"nodes": 12, "components": 1, "connected": True}
        assert result["transpositions_share_edge"] is True

    def test_k3_text(self, capsys):
        """Test the triangle has a single Hamilton cycle"""
        assert main(["hamilton", "--r", "3"]) == 0
        assert "K_3: 1 Hamilton cycles" in capsys.readouterr().out

    def test_out_of_range(self):
        """Test r beyond the Hamilton limit exits with 2"""
        assert main(["hamilton", "--r", "9"]) == 2
