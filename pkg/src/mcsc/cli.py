"""Command line driver: ``solve``, ``rank`` and ``check``.

Exit status is 0 on success, 2 when the system has no equilibrium and 1 on
any error.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from decimal import Decimal, InvalidOperation

from . import coalition as co
from . import evaluate as ev
from .errors import McsError
from .mcs import enumerate_equilibria
from .parsing import parse_mcs, parse_problem
from .poss import poss_equilibria
from .report import ResultReport, format_number, coalition_record, ranking_record, state_record

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT = 0, 1, 2
ENV_MAX_ATOMS = "MCSC_MAX_ATOMS"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcsc", description="Coalitions from multi-context systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--mode", choices=("classical", "possibilistic"), default="classical")
        sp.add_argument("--max-atoms", type=int, default=None)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    solve = sub.add_parser("solve", help="equilibria and coalitions of a problem document")
    common(solve)
    solve.add_argument("--emit-mcs", action="store_true", help="include the compiled system")
    solve.add_argument("--emit-dot", action="store_true", help="include dependence graphs as DOT")
    rank = sub.add_parser("rank", help="score and rank the coalitions of a problem document")
    common(rank)
    rank.add_argument("--metric", required=True,
                      choices=("ws", "wp", "topsis", "cost", "conviviality"))
    rank.add_argument("--weights", default=None, help="e.g. g_1=0.4,g_2=0.1,...")
    rank.add_argument("--emit-mcs", action="store_true")
    rank.add_argument("--emit-dot", action="store_true")
    check = sub.add_parser("check", help="equilibria of a system written in the MCS language")
    common(check)
    check.add_argument("--all", action="store_true", help="print every equilibrium")
    return p


def _max_atoms(args):
    if args.max_atoms is not None:
        return args.max_atoms
    value = os.environ.get(ENV_MAX_ATOMS)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{ENV_MAX_ATOMS} must be an integer, got {value!r}") from None


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _weights(spec: str) -> dict:
    out = {}
    for item in spec.split(","):
        goal, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"weights must look like g=0.25, got {item!r}")
        try:
            out[goal.strip()] = Decimal(value.strip())
        except InvalidOperation:
            raise ValueError(f"weight {value!r} is not a number") from None
    return out


def _solve_problem(args, report: ResultReport):
    problem = parse_problem(_read(args.file)).problem
    max_atoms = _max_atoms(args)
    if args.mode == "possibilistic":
        system = co.compile_possibilistic(problem)
        states = poss_equilibria(system, max_atoms)
    else:
        system = co.compile_classical(problem)
        states = enumerate_equilibria(system, max_atoms)
    report.consistent = bool(states)
    report.equilibria = [state_record(system, s, f"S{i}") for i, s in enumerate(states)]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        coalitions = co.extract_coalitions(problem, states)
    report.diagnostics += [str(w.message) for w in caught]
    report.coalitions = [coalition_record(c) for c in coalitions]
    report.unachievable_goals = co.unachievable_goals(problem, coalitions)
    if args.emit_mcs:
        report.mcs = str(system)
    if args.emit_dot:
        report.dot = {c.id: ev.DependenceGraph.from_coalition(problem, c).to_dot(c.id)
                      for c in coalitions}
    return problem, coalitions


def _rank(args, report: ResultReport, problem, coalitions):
    metric = args.metric
    if metric in ("ws", "wp", "topsis"):
        weights = _weights(args.weights) if args.weights else problem.goal_weights
        matrix = ev.ScoreMatrix.from_coalitions(coalitions, problem.goals, weights)
        method = {"ws": ev.weighted_sum, "wp": ev.wp_rank, "topsis": ev.topsis}[metric]
        ranking = method(matrix)
        columns = list(matrix.criteria)
        rows = [{"alternative": a, "values": {c: format_number(q) for c, q in zip(columns, row)}}
                for a, row in zip(matrix.alternatives, matrix.scores)]
        report.metrics = {"columns": columns, "rows": rows,
                          "weights": {c: format_number(w) for c, w in zip(columns, matrix.weights)}}
    elif metric == "cost":
        if problem.distances is None:
            raise ValueError("the cost metric needs a distance table")
        ranking = ev.cost_ranking(coalitions, problem.distances)
        columns = list(problem.agent_ids) + ["cost"]
        rows = []
        for c in coalitions:
            per_agent = ev.agent_distances(c, problem.distances, problem.agent_ids)
            values = {a: format_number(per_agent[a]) for a in problem.agent_ids}
            values["cost"] = format_number(ev.coalition_cost(c, problem.distances))
            rows.append({"alternative": c.id, "values": values})
        report.metrics = {"columns": columns, "rows": rows}
    else:
        n, g = len(problem.agents), len(problem.goals)
        ranking = ev.conviviality_ranking(problem, coalitions)
        columns = ["pairs", "omega", "conviviality"]
        rows = []
        for c in coalitions:
            graph = ev.DependenceGraph.from_coalition(problem, c)
            rows.append({"alternative": c.id, "values": {
                "pairs": str(ev.cycle_pair_count(graph)),
                "omega": str(ev.omega(n, g)),
                "conviviality": format_number(ev.conviviality(graph, n, g))}})
        report.metrics = {"columns": columns, "rows": rows}
    report.ranking = ranking_record(ranking)


def _check(args, report: ResultReport):
    system = parse_mcs(_read(args.file)).mcs
    max_atoms = _max_atoms(args)
    if args.mode == "possibilistic":
        states = poss_equilibria(system, max_atoms)
    else:
        states = enumerate_equilibria(system.classical(), max_atoms)
    report.consistent = bool(states)
    shown = states if args.all else states[:1]
    report.equilibria = [state_record(system, s, f"S{i}") for i, s in enumerate(shown)]
    report.diagnostics.append(f"{len(states)} equilibri{'um' if len(states) == 1 else 'a'}")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    report = ResultReport(args.command, args.mode, True)
    try:
        if args.command == "check":
            _check(args, report)
        else:
            problem, coalitions = _solve_problem(args, report)
            if args.command == "rank":
                _rank(args, report, problem, coalitions)
    except (McsError, ValueError, KeyError, OSError) as exc:
        stderr.write(f"mcsc: error: {exc}\n")
        return EXIT_ERROR
    stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
