"""Three agents classify an article; adding one fact makes them disagree.

Run with ``python3 demos/article_classification.py``.
"""

from mcsc import (Mcs, check_consistency, enumerate_equilibria, load_bundled, parse_mcs,
                  possibility_of_state)
from mcsc.poss import atom_necessity


def main():
    text = load_bundled("example1.mcs")
    mcs = parse_mcs(text).mcs
    (state,) = enumerate_equilibria(mcs)
    print("Equilibrium:", state)

    with_profb = parse_mcs(text.replace("profA.", "profA.\n    profB.")).mcs
    report = check_consistency(with_profb, suggest_repairs=True)
    print("\nWith profB the system is", "consistent" if report.consistent else "inconsistent")
    print("Dropping any one of these bridge rules restores consistency:")
    for i in report.repairs:
        print(f"  {with_profb.bridge_rules[i]}")
    repaired = Mcs(with_profb.contexts, with_profb.bridge_rules[1:])
    print("Without the first one:", enumerate_equilibria(repaired)[0])

    weighted = parse_mcs(load_bundled("example2.mcs")).mcs
    print("\nWith certainty degrees on every rule:")
    print("  pi of the equilibrium:", possibility_of_state(weighted, state))
    for ctx, atom in [("c1", "centralizedComputing"), ("c2", "middleware"),
                      ("c1", "distributedComputing")]:
        print(f"  N({atom}) = {atom_necessity(weighted, ctx, atom)}")


if __name__ == "__main__":
    main()
