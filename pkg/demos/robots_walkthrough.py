"""Four delivery robots: compile the problem, solve it, read off coalitions.

Run with ``python3 demos/robots_walkthrough.py``.
"""

from mcsc import (compile_classical, compile_possibilistic, derive_dependencies,
                  enumerate_equilibria, extract_coalitions, hide_auxiliary, load_bundled,
                  parse_problem, poss_equilibria)


def show_state(names, state):
    for name, beliefs in zip(names, state):
        print(f"  {name}: {{{', '.join(sorted(beliefs))}}}")


def main():
    problem = parse_problem(load_bundled("robots.json")).problem
    print(f"{len(problem.agents)} agents, goals {', '.join(problem.goals)}")
    print(f"{len(derive_dependencies(problem))} dependence relations, for example:")
    for dep in derive_dependencies(problem)[:3]:
        print("  " + str(dep))

    mcs = compile_classical(problem)
    states = enumerate_equilibria(mcs)
    print(f"\nThe compiled system has {len(states)} equilibria (helper atoms hidden):")
    for i, s in enumerate(states):
        print(f"S{i}")
        show_state(mcs.names, hide_auxiliary(problem, s))

    print("\nCoalitions with the certainty of each goal:")
    poss = poss_equilibria(compile_possibilistic(problem))
    for c in extract_coalitions(problem, poss):
        items = [f"{a.goal} by {a.agent} ({a.plan}, {a.necessity})" for a in c.assignments]
        print(f"  {c.id}: " + "; ".join(items))


if __name__ == "__main__":
    main()
