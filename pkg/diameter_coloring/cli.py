"""
Command-line front end.

Exit codes: 0 SAT (or success), 20 UNSAT, 1 error, 124 timeout.
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from .config import SolverConfig, SolverMode, log_level_from_env
from .core.instance import reduce
from .core.outcome import SearchOutcome, Verdict
from .core.twosat import encode_lists
from .exceptions import DiameterColoringError
from .modules.benchmark import BenchmarkConfig, run_benchmark
from .modules.generator import GenFamily, GenSpec, ListMode, generate
from .modules.homomorphism import HomInstance, TargetGraph
from .modules.homomorphism_solver import HomomorphismSolver
from .modules.instance_io import Instance, parse, serialize
from .modules.list_coloring_solver import ListColoringSolver
from .modules.oracle import DEFAULT_CAP, SweepConfig, brute_color, brute_hom, differential_sweep

logger = logging.getLogger(__name__)

EXIT_SAT = 0
EXIT_ERROR = 1
EXIT_UNSAT = 20
EXIT_TIMEOUT = 124

EXIT_CODES = {
    Verdict.SAT: EXIT_SAT,
    Verdict.UNSAT: EXIT_UNSAT,
    Verdict.TIMEOUT: EXIT_TIMEOUT,
}


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group(title="Solver options")
    group.add_argument("--mode", type=SolverMode.parse, help="complete|paper|randomized|baseline-ms|diam3")
    group.add_argument("--k", type=float, dest="k_const", help="constant K of the witness size bound")
    group.add_argument("--seed", type=int, dest="rng_seed", help="seed of the witness sampler")
    group.add_argument("--budget", type=int, dest="witness_budget", help="max (S, S~) pairs scanned per B4 node")
    group.add_argument("--retries", type=int, dest="max_retries", help="sampling attempts per node")
    group.add_argument("--time-limit", type=float, dest="time_limit", help="seconds before reporting TIMEOUT")
    group.add_argument("--threads", type=int, help="worker threads for the root children")
    group.add_argument("--phi-cap", type=int, dest="phi_cap", help="colorings of S~ tried per sampled witness")
    group.add_argument("--trace", action="store_true", help="record the rules tried at every node")


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default: DIAMCOL_LOG_LEVEL or WARNING)")
    parser.add_argument("--env-file", help="load DIAMCOL_* settings from this .env file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diameter-coloring", description="Exact List 3-Coloring for graphs of diameter 2 and 3.")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    solve = commands.add_parser("solve", help="decide a List 3-Coloring instance")
    solve.add_argument("file", nargs="?", help="instance file; stdin when omitted or '-'")
    _add_solver_options(solve)
    solve.add_argument("--stats", action="store_true", help="print counters as key=value lines")
    solve.add_argument("--cert", help="write the coloring to this file when SAT")
    solve.add_argument("--cnf", help="write the 2-SAT encoding of the reduced instance (DIMACS)")
    _add_common_options(solve)

    hom = commands.add_parser("hom", help="decide a list homomorphism instance")
    hom.add_argument("file", nargs="?", help="instance file; stdin when omitted or '-'")
    hom.add_argument("--target", help="named target such as C5 or PSTAR3 when the file has none")
    _add_solver_options(hom)
    hom.add_argument("--stats", action="store_true", help="print counters as key=value lines")
    hom.add_argument("--cert", help="write the mapping to this file when SAT")
    hom.add_argument("--cnf", help="write the 2-SAT encoding of the reduced instance (DIMACS)")
    _add_common_options(hom)

    oracle = commands.add_parser("oracle", help="brute-force verdict and solution count")
    oracle.add_argument("file", nargs="?", help="instance file; stdin when omitted or '-'")
    oracle.add_argument("--target", help="named target for homomorphism instances")
    oracle.add_argument("--cap", type=int, default=DEFAULT_CAP, help="refuse larger search spaces")
    oracle.add_argument("--threads", type=int, default=1, help="worker threads")
    _add_common_options(oracle)

    gen = commands.add_parser("gen", help="generate an instance")
    gen.add_argument("--family", type=GenFamily.parse, required=True, help=", ".join(f.value for f in GenFamily))
    gen.add_argument("--n", type=int, required=True, help="number of vertices")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--edge-prob", type=float, help="edge probability for random families")
    gen.add_argument("--lists", type=ListMode.parse, default=ListMode.FULL, help=", ".join(m.value for m in ListMode))
    gen.add_argument("-o", "--output", help="output file; stdout when omitted")
    _add_common_options(gen)

    bench = commands.add_parser("bench", help="solve generated instances and emit CSV")
    bench.add_argument("--family", type=GenFamily.parse, required=True)
    bench.add_argument("--n-list", type=_int_list, required=True, help="comma-separated sizes, e.g. 50,100,200")
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--bench-seed", type=int, default=0, help="seed of the first instance")
    bench.add_argument("--lists", type=ListMode.parse, default=ListMode.FULL)
    bench.add_argument("--edge-prob", type=float)
    bench.add_argument("--csv", help="output CSV file; stdout when omitted")
    _add_solver_options(bench)
    _add_common_options(bench)

    sweep = commands.add_parser("sweep", help="compare the solvers with the oracle")
    sweep.add_argument("--max-vertices", type=int, default=4)
    sweep.add_argument("--lists-per-graph", type=int, default=5)
    sweep.add_argument("--random-diam2", type=int, default=0)
    sweep.add_argument("--random-max-n", type=int, default=8)
    sweep.add_argument("--targets", default="", help="comma-separated targets, e.g. C3,C5,PSTAR3")
    sweep.add_argument("--sweep-seed", type=int, default=0)
    _add_solver_options(sweep)
    _add_common_options(sweep)
    return parser


def _configure_logging(level: Optional[str]) -> None:
    name = (level or log_level_from_env()).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write_text(path: Optional[str], text: str, stdout: TextIO) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    config = SolverConfig.from_env(args.env_file)
    return config.with_overrides(
        mode=args.mode,
        k_const=args.k_const,
        rng_seed=args.rng_seed,
        witness_budget=args.witness_budget,
        max_retries=args.max_retries,
        time_limit=args.time_limit,
        threads=args.threads,
        phi_cap=args.phi_cap,
        record_trace=True if args.trace else None,
    )


def _load(args: argparse.Namespace) -> Instance:
    target = TargetGraph.from_name(args.target) if getattr(args, "target", None) else None
    result = parse(_read_text(args.file), target)
    return result.instance


def _output_colors(inst: Instance, coloring) -> List[int]:
    # Target vertices are printed 1-based, like in the file format.
    if isinstance(inst, HomInstance):
        return [c + 1 for c in coloring]
    return list(coloring)


def _export_cnf(inst: Instance, path: str) -> None:
    reduced = reduce(inst)
    if reduced is None:
        logger.warning("Instance fails during reduction; no encoding written")
        return
    if any(reduced.list_size(v) > 2 for v in range(reduced.vertex_count)):
        logger.warning("Reduced instance still has lists with three colors; no encoding written")
        return
    formula, _ = encode_lists(reduced)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(formula.to_dimacs(comment="2-SAT encoding of the reduced instance"))


def _report(args: argparse.Namespace, inst: Instance, outcome: SearchOutcome, stdout: TextIO) -> int:
    stdout.write(f"s {outcome.verdict.value}\n")
    if outcome.coloring is not None:
        colors = _output_colors(inst, outcome.coloring)
        stdout.write("v " + " ".join(str(c) for c in colors) + "\n")
        if args.cert:
            lines = [f"{v + 1} {c}" for v, c in enumerate(colors)]
            _write_text(args.cert, "\n".join(lines) + "\n", stdout)
    if args.stats:
        for key, value in outcome.stats.as_dict().items():
            stdout.write(f"{key}={value}\n")
        for entry in outcome.stats.rule_trace:
            stdout.write(f"trace={entry}\n")
    return EXIT_CODES[outcome.verdict]


def _cmd_solve(args: argparse.Namespace, stdout: TextIO) -> int:
    config = _solver_config(args)
    inst = _load(args)
    if args.cnf:
        _export_cnf(inst, args.cnf)
    if isinstance(inst, HomInstance):
        outcome = HomomorphismSolver(config).solve(inst)
    else:
        outcome = ListColoringSolver(config).solve(inst)
    return _report(args, inst, outcome, stdout)


def _cmd_hom(args: argparse.Namespace, stdout: TextIO) -> int:
    config = _solver_config(args)
    inst = _load(args)
    if not isinstance(inst, HomInstance):
        raise DiameterColoringError("hom needs a target: add a 't' section or pass --target")
    if args.cnf:
        _export_cnf(inst, args.cnf)
    return _report(args, inst, HomomorphismSolver(config).solve(inst), stdout)


def _cmd_oracle(args: argparse.Namespace, stdout: TextIO) -> int:
    inst = _load(args)
    if isinstance(inst, HomInstance):
        report = brute_hom(inst, cap=args.cap, threads=args.threads)
    else:
        report = brute_color(inst, cap=args.cap, threads=args.threads)
    stdout.write(f"s {report.verdict.value}\n")
    stdout.write(f"count={report.count}\n")
    if report.witness is not None:
        stdout.write("v " + " ".join(str(c) for c in _output_colors(inst, report.witness)) + "\n")
    return EXIT_CODES[report.verdict]


def _cmd_gen(args: argparse.Namespace, stdout: TextIO) -> int:
    spec = GenSpec(args.family, args.n, edge_prob=args.edge_prob, rng_seed=args.seed, list_mode=args.lists)
    inst = generate(spec)
    comment = f"{spec.family.value} n={spec.n} seed={spec.rng_seed} lists={spec.list_mode.value}"
    _write_text(args.output, serialize(inst, comment=comment), stdout)
    return EXIT_SAT


def _cmd_bench(args: argparse.Namespace, stdout: TextIO) -> int:
    config = BenchmarkConfig(
        family=args.family,
        n_list=tuple(args.n_list),
        reps=args.reps,
        seed=args.bench_seed,
        list_mode=args.lists,
        edge_prob=args.edge_prob,
        solver=_solver_config(args),
    )
    if args.csv is None or args.csv == "-":
        run_benchmark(config, stdout)
    else:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            run_benchmark(config, handle)
    return EXIT_SAT


def _cmd_sweep(args: argparse.Namespace, stdout: TextIO) -> int:
    targets = tuple(name.strip() for name in args.targets.split(",") if name.strip())
    solver = _solver_config(args)
    overrides = {}
    if args.mode is not None:
        overrides["modes"] = (args.mode,)
    config = SweepConfig(
        max_vertices=args.max_vertices,
        lists_per_graph=args.lists_per_graph,
        random_diam2=args.random_diam2,
        random_max_n=args.random_max_n,
        targets=targets,
        rng_seed=args.sweep_seed,
        solver=solver,
        **overrides,
    )
    report = differential_sweep(config)
    stdout.write("\n".join(report.summary_lines()) + "\n")
    return EXIT_SAT if report.ok else EXIT_ERROR


COMMANDS = {
    "solve": _cmd_solve,
    "hom": _cmd_hom,
    "oracle": _cmd_oracle,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Run the command line.

    Returns:
        The process exit code.
    """
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args, out)
    except (OSError, DiameterColoringError) as e:
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
