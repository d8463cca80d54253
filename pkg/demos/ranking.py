"""Rank the robot coalitions by cost, conviviality and certainty scores.

Run with ``python3 demos/ranking.py``.
"""

from mcsc import (DependenceGraph, ScoreMatrix, compile_possibilistic, extract_coalitions,
                  load_bundled, parse_problem, poss_equilibria, topsis, weighted_sum, wp_rank)
from mcsc.evaluate import conviviality_ranking, cost_ranking


def line(ranking):
    return ", ".join(f"{a} ({s})" for a, s in ranking.entries)


def main():
    problem = parse_problem(load_bundled("robots.json")).problem
    coalitions = extract_coalitions(problem, poss_equilibria(compile_possibilistic(problem)))

    print("cost (lower is better):", line(cost_ranking(coalitions, problem.distances)))
    print("conviviality:          ", line(conviviality_ranking(problem, coalitions)))
    print("\nDependence graph of C0 in DOT:")
    print(DependenceGraph.from_coalition(problem, coalitions[0]).to_dot("C0"))

    equal = ScoreMatrix.from_coalitions(coalitions, problem.goals)
    print("\nweighted sum, equal weights:", line(weighted_sum(equal)))
    print("weighted product:           ", line(wp_rank(equal)))
    print("TOPSIS:                     ", line(topsis(equal)))
    skewed = ScoreMatrix.from_coalitions(coalitions, problem.goals,
                                         {"g_1": "0.4", "g_2": "0.1", "g_3": "0.1", "g_4": "0.4"})
    print("weighted sum, g_1 and g_4 weighted 0.4:", line(weighted_sum(skewed)))


if __name__ == "__main__":
    main()
