"""
cyclebound command-line interface
verify / analyze / generate / fuzz / hamilton over edge-list graph files.

Exit codes: 0 success, 2 bad input or parameters, 3 counterexample or failed
identity, 4 an exact computation would exceed a configured cap.
"""

import argparse
import random
import sys
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import orjson
from pydantic import ValidationError

from .core.config import settings
from .core.exceptions import (
    CapExceededError,
    CounterexampleError,
    CycleBoundError,
    InvariantViolation,
)
from .core.logger import get_application_logger, setup_logging
from .models.graph_models import WeightedGraph, format_rational, parse_rational
from .models.report_models import EqualityCertificate, GapVerdict, InequalityReport
from .models.spec_models import ArithmeticMode, BlockGraphSpec, OutputFormat, RandomSpec, RunConfig
from .services.decomposition import (
    block_decomposition,
    is_block_graph,
    is_block_graph_by_cliques,
)
from .services.equality_lab import EqualityLab
from .services.generators import (
    gen_block_graph,
    gen_complete,
    gen_cycle,
    gen_induced_clique,
    gen_random_connected,
    gen_theta,
    gen_tree,
    random_block_graph_spec,
)
from .services.graph_codec import (
    graph_to_payload,
    induced_subgraph,
    load_graph,
    serialize_graph,
)
from .services.cycle_engine import CycleEngine
from .services.inequality_verifier import InequalityVerifier

logger = get_application_logger("main")

JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2

GENERATOR_KINDS = ("tree", "induced-clique", "block-graph", "random", "cycle", "complete", "theta")


# ----------------------------------------------------------------------
# output helpers

def emit_json(payload: Dict[str, Any]) -> None:
    sys.stdout.buffer.write(orjson.dumps(payload, option=JSON_OPTIONS) + b"\n")
    sys.stdout.flush()


def _rational(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else format_rational(value)


def _split_values(text: str) -> List[str]:
    return [token for token in text.replace(" ", "").split(",") if token]


def report_payload(
    report: InequalityReport, labels: Sequence[str], verdict: GapVerdict
) -> Dict[str, Any]:
    """Report JSON; rationals as "p/q" strings"""
    payload = {
        "n": report.n,
        "m": report.m,
        "connected": report.connected,
        "local_sum": _rational(report.local_sum),
        "bound": _rational(report.bound),
        "gap": _rational(report.gap),
        "equality": verdict is GapVerdict.EQUALITY,
        "verdict": verdict.value,
        "edges": [
            {
                "u": labels[p.u],
                "v": labels[p.v],
                "w": _rational(p.weight),
                "c_w": _rational(p.c_w),
                "phi": _rational(p.phi),
                "bridge": p.is_bridge,
            }
            for p in report.profiles
        ],
        "components": [
            {
                "vertices": [labels[v] for v in c.vertices],
                "phi": _rational(c.phi_subtotal),
                "bound": _rational(c.bound),
            }
            for c in report.per_component
        ],
    }
    if verdict is GapVerdict.NUMERICALLY_TIGHT:
        payload["gap_float"] = float(report.gap)
    return payload


def certificate_status(certificate: EqualityCertificate, verdict: GapVerdict) -> str:
    """Float runs never claim equality; a tight gap is reported as numerically tight"""
    if verdict is GapVerdict.NUMERICALLY_TIGHT:
        return verdict.value
    return certificate.status.value


def certificate_payload(
    certificate: EqualityCertificate, labels: Sequence[str], verdict: GapVerdict
) -> Dict[str, Any]:
    return {
        "status": certificate_status(certificate, verdict),
        "route": certificate.route.value if certificate.route else None,
        "gap": _rational(certificate.gap),
        "block_graph": certificate.is_block_graph,
        "blocks": [
            {
                "vertices": [labels[v] for v in block.vertices],
                "status": block.status.value,
                "a": [_rational(x) for x in block.solution.a] if block.solution else None,
                "phi": _rational(block.phi_subtotal),
            }
            for block in certificate.per_block
        ],
        "necessary_conditions": [
            {
                "vertices": [labels[v] for v in c.vertices],
                "phi_equals_bound": c.phi_subtotal_equals_bound,
                "tight_cycle": [labels[v] for v in c.tight_cycle.vertices] if c.tight_cycle else None,
                "termwise_tight": c.termwise_tight,
            }
            for c in certificate.diagnostics.components
        ],
    }


def print_report(report: InequalityReport, labels: Sequence[str], verdict: GapVerdict) -> None:
    shape = "connected" if report.connected else (
        f"disconnected, {report.connected_component_count} components"
    )
    print(f"n = {report.n}, m = {report.m}, {shape}")
    print(f"local_sum = {report.local_sum}")
    print(f"bound     = {report.bound}")
    print(f"gap       = {report.gap}")
    print(f"verdict   = {verdict.value}")
    print("edges:")
    for p in report.profiles:
        marker = "  bridge" if p.is_bridge else ""
        print(f"  {labels[p.u]}-{labels[p.v]}  w={p.weight}  C_w={p.c_w}  phi={p.phi}{marker}")
    print("components:")
    for c in report.per_component:
        members = ",".join(labels[v] for v in c.vertices)
        print(f"  {{{members}}}: phi = {c.phi_subtotal} <= {c.bound}")


# ----------------------------------------------------------------------
# commands

class _InputError(CycleBoundError):
    exit_code = 2


def _read_graph(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as error:
        raise _InputError(f"cannot read {path}: {error.strerror}") from None
    return load_graph(data)


def cmd_verify(path: str, config: RunConfig) -> int:
    loaded = _read_graph(path)
    verifier = InequalityVerifier(config=config)
    report = verifier.verify_main(loaded.graph)
    verdict = verifier.verdict(report)
    logger.info(f"verify {path}: gap {report.gap} ({verdict.value})")

    if config.output is OutputFormat.JSON:
        emit_json(report_payload(report, loaded.labels, verdict))
    else:
        print_report(report, loaded.labels, verdict)
    return 0


def cmd_analyze(path: str, thresholds: Sequence[str], config: RunConfig) -> int:
    loaded = _read_graph(path)
    graph, labels = loaded.graph, loaded.labels
    try:
        values = [parse_rational(t) for t in thresholds]
    except ValueError as error:
        raise _InputError(f"bad --threshold: {error}") from None

    lab = EqualityLab(config=config)
    verifier = lab.verifier
    blocks = block_decomposition(graph)
    report = verifier.verify_main(graph, blocks)
    block_check = is_block_graph(graph, blocks)
    if block_check.is_block_graph != is_block_graph_by_cliques(graph):
        raise InvariantViolation("block and maximal-clique characterisations of block graphs disagree")
    certificate = lab.certify_equality(graph, report)
    forest = verifier.light_edge_forest(graph, report.profiles)
    checks = [verifier.threshold_mass(graph, t, report.profiles) for t in values]
    verdict = verifier.verdict(report)

    bridges = [p for p in report.profiles if p.is_bridge]
    if config.output is OutputFormat.JSON:
        emit_json({
            "bridges": [[labels[p.u], labels[p.v]] for p in bridges],
            "blocks": [
                {"vertices": [labels[v] for v in block.vertices], "clique": block.is_clique}
                for block in blocks.blocks
            ],
            "cut_vertices": [labels[v] for v in blocks.cut_vertices],
            "block_graph": block_check.is_block_graph,
            "report": report_payload(report, labels, verdict),
            "certificate": certificate_payload(certificate, labels, verdict),
            "light_edge_forest": {
                "edges": [
                    [labels[graph.edges[i].u], labels[graph.edges[i].v]] for i in forest.edges
                ],
                "acyclic": forest.acyclic,
                "size": len(forest.edges),
                "limit": forest.limit,
            },
            "thresholds": [
                {
                    "T": _rational(c.threshold),
                    "light_mass": _rational(c.light_mass),
                    "bound": _rational(c.bound),
                    "heavy_mass": _rational(c.heavy_mass),
                    "complement_bound": _rational(c.complement_bound),
                    "holds": c.holds,
                }
                for c in checks
            ],
        })
        return 0

    print_report(report, labels, verdict)
    print("bridges: " + (", ".join(f"{labels[p.u]}-{labels[p.v]}" for p in bridges) or "none"))
    print("blocks:")
    for block in blocks.blocks:
        kind = "clique" if block.is_clique else "not a clique"
        print(f"  {{{','.join(labels[v] for v in block.vertices)}}} ({kind})")
    print(f"block graph: {'yes' if block_check.is_block_graph else 'no'}")
    route = f" ({certificate.route.value})" if certificate.route else ""
    print(f"certificate: {certificate_status(certificate, verdict)}{route}")
    for block in certificate.per_block:
        a = ""
        if block.solution:
            a = "  a = (" + ", ".join(str(x) for x in block.solution.a) + ")"
        print(f"  {{{','.join(labels[v] for v in block.vertices)}}}: {block.status.value}{a}")
    light = ", ".join(f"{labels[graph.edges[i].u]}-{labels[graph.edges[i].v]}" for i in forest.edges)
    print(f"light-edge forest F: {{{light}}} (|F| = {len(forest.edges)} <= {forest.limit}, acyclic)")
    for c in checks:
        print(f"threshold T={c.threshold}: mass {c.light_mass} <= {c.bound}; "
              f"heavy mass {c.heavy_mass} >= {c.complement_bound}")
    return 0


def build_generated_graph(args: argparse.Namespace) -> WeightedGraph:
    kind = args.kind
    seed = args.seed
    if kind == "tree":
        return gen_tree(_required(args.n, "--n"), seed)
    if kind == "induced-clique":
        return gen_induced_clique(_required(args.r, "--r"), _split_values(_required(args.a, "--a")))
    if kind == "block-graph":
        if args.spec:
            spec = BlockGraphSpec.model_validate_json(Path(args.spec).read_bytes())
        else:
            spec = random_block_graph_spec(seed=seed)
        return gen_block_graph(spec, seed)
    if kind == "random":
        spec = RandomSpec(n=_required(args.n, "--n"), m=args.m, edge_probability=args.p, seed=seed)
        return gen_random_connected(spec)
    if kind == "cycle":
        weights = _split_values(args.weights) if args.weights else None
        return gen_cycle(_required(args.n, "--n"), weights)
    if kind == "complete":
        return gen_complete(_required(args.r, "--r"), args.weight)
    # theta
    lengths = [int(token) for token in _split_values(args.paths or "2,2,2")]
    return gen_theta(lengths, args.weight)


def _required(value, flag: str):
    if value is None:
        raise _InputError(f"this generator needs {flag}")
    return value


def cmd_generate(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        graph = build_generated_graph(args)
    except OSError as error:
        raise _InputError(f"cannot read spec: {error}") from None
    except ValueError as error:
        if isinstance(error, CycleBoundError):
            raise
        raise _InputError(str(error)) from None
    logger.info(f"generated {args.kind}: n={graph.n}, m={graph.m}")

    if config.output is OutputFormat.JSON:
        emit_json(graph_to_payload(graph))
    else:
        sys.stdout.write(serialize_graph(graph))
    return 0


def cmd_fuzz(n_max: int, trials: int, seed: int, config: RunConfig) -> int:
    """Random connected instances per n in [3, n_max], every check on each"""
    if n_max > config.enumeration_cap:
        raise CapExceededError("enumeration_cap", config.enumeration_cap, n_max)

    verifier = InequalityVerifier(config=config)
    master = random.Random(seed)
    counts = {
        "main": 0, "oracle": 0, "cycle_phi": 0, "light_forest": 0,
        "threshold": 0, "bondy_fan": 0, "erdos_gallai": 0,
    }
    instances = 0
    equalities = 0
    min_gap: Optional[Fraction] = None

    for n in range(3, n_max + 1):
        for _ in range(trials):
            instance_seed = master.getrandbits(63)
            rng = random.Random(instance_seed)
            spec = RandomSpec(n=n, m=rng.randint(n - 1, comb(n, 2)), seed=instance_seed)
            graph = gen_random_connected(spec)
            try:
                gap = _fuzz_instance(graph, verifier, rng, counts)
            except InvariantViolation as error:
                _write_failure(graph, seed, error)
                raise
            instances += 1
            equalities += gap == 0
            if min_gap is None or gap < min_gap:
                min_gap = gap

    summary = {
        "seed": seed,
        "n_max": n_max,
        "trials": trials,
        "instances": instances,
        "passed": counts,
        "equalities": equalities,
        "min_gap": _rational(min_gap),
    }
    logger.info(f"fuzz: {instances} instances passed, min gap {summary['min_gap']}")
    if config.output is OutputFormat.JSON:
        emit_json(summary)
    else:
        print(f"fuzz seed={seed} n_max={n_max} trials={trials}: {instances} instances, all passed")
        for name, value in counts.items():
            print(f"  {name:<13} {value}")
        print(f"  equalities    {equalities}")
        print(f"  min gap       {summary['min_gap']}")
    return 0


def _fuzz_instance(
    graph: WeightedGraph, verifier: InequalityVerifier, rng: random.Random, counts: Dict[str, int]
) -> Fraction:
    engine = verifier.engine
    blocks = block_decomposition(graph)
    report = verifier.verify_main(graph, blocks)
    counts["main"] += 1

    oracle = engine.brute_force_c_w(graph, blocks)
    for p in report.profiles:
        if not p.is_bridge and oracle.get(p.edge) != p.c_w:
            raise InvariantViolation(
                f"edge {p.u}-{p.v}: pruned search gives {p.c_w}, enumeration {oracle.get(p.edge)}"
            )
    counts["oracle"] += 1

    verifier.verify_cycle_phi_bound(graph, report.profiles)
    counts["cycle_phi"] += 1
    verifier.light_edge_forest(graph, report.profiles)
    counts["light_forest"] += 1

    top = max(p.c_w for p in report.profiles)
    for _ in range(settings.fuzz_threshold_samples):
        verifier.threshold_mass(graph, top * Fraction(rng.randint(1, 200), 100), report.profiles)
    counts["threshold"] += 1

    phi = report.phi
    for component in report.per_component:
        if component.edge_count == 0:
            continue
        sub, _, edge_map = induced_subgraph(graph, component.vertices)
        bondy_fan = verifier.verify_bondy_fan(sub, [phi[i] for i in edge_map])
        if not bondy_fan.holds:
            raise CounterexampleError(
                f"component {component.vertices}: heaviest phi-cycle "
                f"{bondy_fan.witness.weight} < {bondy_fan.required}",
                serialize_graph(graph),
            )
        erdos_gallai = verifier.verify_erdos_gallai(sub)
        if not erdos_gallai.holds:
            raise CounterexampleError(
                f"component {component.vertices}: longest cycle "
                f"{erdos_gallai.longest_length} < {erdos_gallai.required}",
                serialize_graph(graph),
            )
    counts["bondy_fan"] += 1
    counts["erdos_gallai"] += 1
    return report.gap


def _write_failure(graph: WeightedGraph, seed: int, error: Exception) -> Path:
    directory = Path(settings.fuzz_output_directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"counterexample-seed{seed}.txt"
    message = str(error).split("\n--- instance ---")[0]
    header = "".join(f"# {line}\n" for line in message.splitlines())
    path.write_text(header + serialize_graph(graph), encoding="utf-8")
    logger.error(f"Failing instance written to {path}")
    return path


def cmd_hamilton(r: int, config: RunConfig) -> int:
    engine = CycleEngine(config)
    catalog = engine.hamilton_catalog(r)
    result: Dict[str, Any] = {
        "r": r,
        "cycles": catalog.size,
        "expected_cycles": factorial(r - 1) // 2,
        "incidence": sorted(set(catalog.incidence.values())),
        "expected_incidence": factorial(r - 2),
    }
    if r >= 4:
        result["transpositions_share_edge"] = engine.transposition_moves_share_edge(r)
        if r <= engine.two_opt_max_order:
            meta = engine.two_opt_graph_connected(r)
            result["two_opt"] = {
                "nodes": meta.node_count,
                "components": meta.component_count,
                "connected": meta.connected,
            }

    if config.output is OutputFormat.JSON:
        emit_json(result)
        return 0
    print(f"K_{r}: {catalog.size} Hamilton cycles ((r-1)!/2 = {result['expected_cycles']})")
    print(f"per-edge incidence: {result['incidence']} ((r-2)! = {result['expected_incidence']})")
    if "transpositions_share_edge" in result:
        print(f"adjacent transpositions keep an edge: {result['transpositions_share_edge']}")
    if "two_opt" in result:
        meta = result["two_opt"]
        state = "connected" if meta["connected"] else f"{meta['components']} components"
        print(f"share-an-edge meta-graph on {meta['nodes']} cycles: {state}")
    return 0


# ----------------------------------------------------------------------
# argument parsing

def _add_run_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Run flags work before or after the command name"""

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--mode", choices=[m.value for m in ArithmeticMode], default=default(None),
                        help="exact (default) or float verdicts")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="emit JSON instead of text")
    parser.add_argument("--enum-cap", "--enumeration-cap", dest="enumeration_cap", type=int,
                        default=default(None), help="vertex cap for cycle enumeration")
    parser.add_argument("--search-cap", dest="search_cap", type=int, default=default(None),
                        help="vertex cap for heaviest-cycle searches (per block)")
    parser.add_argument("--workers", dest="max_workers", type=int, default=default(None),
                        help="processes for per-block searches")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        default=default(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclebound",
        description="Exact checks of sum_e w(e)/C_w(e) <= (n-1)/2 on weighted graphs",
    )
    _add_run_flags(parser, suppress=False)
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="report the local cycle sum of a graph file")
    verify.add_argument("path")
    _add_run_flags(verify, suppress=True)

    analyze = commands.add_parser("analyze", help="decomposition, certificate and corollaries")
    analyze.add_argument("path")
    analyze.add_argument("--threshold", action="append", default=[], metavar="T",
                         help="threshold T > 0 for the light-mass bound (repeatable)")
    _add_run_flags(analyze, suppress=True)

    generate = commands.add_parser("generate", help="write an instance to standard output")
    generate.add_argument("kind", choices=GENERATOR_KINDS)
    generate.add_argument("--n", type=int)
    generate.add_argument("--m", type=int)
    generate.add_argument("--p", type=float, help="extra-edge probability (random)")
    generate.add_argument("--r", type=int)
    generate.add_argument("--a", help="comma-separated vertex values (induced-clique)")
    generate.add_argument("--weights", help="comma-separated cycle weights (cycle)")
    generate.add_argument("--weight", default="1", help="uniform weight (complete, theta)")
    generate.add_argument("--paths", help="comma-separated path lengths (theta)")
    generate.add_argument("--spec", help="BlockGraphSpec JSON file (block-graph)")
    generate.add_argument("--seed", type=int, default=0)
    _add_run_flags(generate, suppress=True)

    fuzz = commands.add_parser("fuzz", help="random connected instances through every check")
    fuzz.add_argument("--n-max", type=int, default=8)
    fuzz.add_argument("--trials", type=int, default=200)
    fuzz.add_argument("--seed", type=int, default=0)
    _add_run_flags(fuzz, suppress=True)

    hamilton = commands.add_parser("hamilton", help="Hamilton cycle catalog of K_r")
    hamilton.add_argument("--r", type=int, required=True)
    _add_run_flags(hamilton, suppress=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    try:
        config = RunConfig.from_settings(
            settings,
            mode=args.mode,
            enumeration_cap=args.enumeration_cap,
            search_cap=args.search_cap,
            max_workers=args.max_workers,
            output=OutputFormat.JSON if args.json else None,
        )
    except ValidationError as error:
        print(f"error: invalid run configuration: {error}", file=sys.stderr)
        return 2

    try:
        if args.command == "verify":
            return cmd_verify(args.path, config)
        if args.command == "analyze":
            return cmd_analyze(args.path, args.threshold, config)
        if args.command == "generate":
            return cmd_generate(args, config)
        if args.command == "fuzz":
            return cmd_fuzz(args.n_max, args.trials, args.seed, config)
        return cmd_hamilton(args.r, config)
    except CycleBoundError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code
    except ValidationError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
