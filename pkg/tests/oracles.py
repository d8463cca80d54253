"""Brute-force reference implementations.

These follow the definitions directly over every subset of the relevant
alphabet and share no code with the package beyond its data types, so they
can judge the optimised routines.
"""

import itertools
from decimal import Decimal

from mcsc.logic import Rule, Semantics


def subsets(atoms):
    atoms = sorted(atoms)
    for r in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            yield frozenset(combo)


def naive_least_model(pairs, facts=()):
    """Iterate the immediate-consequence operator until nothing changes."""
    model = set(facts)
    changed = True
    while changed:
        changed = False
        for head, body in pairs:
            if set(body) <= model and head not in model:
                model.add(head)
                changed = True
    return frozenset(model)


def gl_answer_sets(rules, alphabet):
    """Every T over the alphabet equal to the least model of its reduct."""
    out = []
    for t in subsets(alphabet):
        kept = [(r.head, r.pos) for r in rules if not (r.neg & t)]
        if naive_least_model(kept) == t:
            out.append(t)
    return out


def _is_model(s, rules, choices, constraints):
    if any(r.pos <= s and not (r.neg & s) and r.head not in s for r in rules):
        return False
    if any(not (set(c.alternatives) & s) for c in choices):
        return False
    return not any(c.pos <= s and not (c.neg & s) for c in constraints)


def brute_minimal_models(rules, choices, constraints, alphabet):
    """Subset-minimal sets satisfying every rule, choice clause and denial."""
    models = [s for s in subsets(alphabet) if _is_model(s, rules, choices, constraints)]
    return [m for m in models if not any(o < m for o in models)]


def oracle_acceptable(program, extra=()):
    """ACC of a context once the given bridge heads are added as facts."""
    extra = frozenset(extra)
    rules = list(program.rules) + [Rule(a) for a in extra]
    alphabet = program.alphabet | extra
    if program.semantics is Semantics.MINIMAL_MODEL:
        return brute_minimal_models(rules, program.choices, program.constraints, alphabet)
    sets = gl_answer_sets(rules, alphabet)
    return [s for s in sets
            if not any(c.pos <= s and not (c.neg & s) for c in program.constraints)]


def _bridge_heads(bridges, state, n):
    heads = [set() for _ in range(n)]
    for target, head, pos, neg in bridges:
        if all(a in state[i] for i, a in pos) and not any(a in state[i] for i, a in neg):
            heads[target].add(head)
    return [frozenset(h) for h in heads]


def is_answer_set(rules, t):
    """T is an answer set iff it is the least model of the reduct by T."""
    return naive_least_model([(r.head, r.pos) for r in rules if not (r.neg & t)]) == t


def _accepts(program, heads, s, cache):
    if program.semantics is Semantics.MINIMAL_MODEL:
        key = (id(program), heads)
        if key not in cache:
            cache[key] = set(oracle_acceptable(program, heads))
        return s in cache[key]
    key = (id(program), heads, s)
    if key not in cache:
        rules = list(program.rules) + [Rule(a) for a in heads]
        cache[key] = is_answer_set(rules, s) and \
            not any(c.pos <= s and not (c.neg & s) for c in program.constraints)
    return cache[key]


def brute_equilibria(mcs):
    """Every belief state over the context alphabets that is an equilibrium."""
    index = {c.name: i for i, c in enumerate(mcs.contexts)}
    bridges = [(index[br.target], br.head, [(index[c], a) for c, a in br.pos],
                [(index[c], a) for c, a in br.neg]) for br in mcs.bridge_rules]
    spaces = [list(subsets(c.program.alphabet)) for c in mcs.contexts]
    cache = {}
    out = []
    for combo in itertools.product(*spaces):
        heads = _bridge_heads(bridges, combo, len(spaces))
        if all(_accepts(ctx.program, h, s, cache)
               for ctx, s, h in zip(mcs.contexts, combo, heads)):
            out.append(tuple(combo))
    return out


def qualified_rules(mcs):
    """(head, pos, neg, degree, is_bridge) over (context name, atom)."""
    out = []
    for ctx in mcs.contexts:
        for r in ctx.program.rules:
            d = Decimal(1) if r.necessity is None else r.necessity.as_decimal()
            out.append(((ctx.name, r.head), {(ctx.name, a) for a in r.pos},
                        {(ctx.name, a) for a in r.neg}, d, False))
    for br in mcs.bridge_rules:
        d = Decimal(1) if br.necessity is None else br.necessity.as_decimal()
        out.append(((br.target, br.head), set(br.pos), set(br.neg), d, True))
    return out


def brute_pi(pmcs, state):
    """pi of a state by the definition, on the reduct by the state itself."""
    names = [c.name for c in pmcs.contexts]
    s = {(n, a) for n, beliefs in zip(names, state) for a in beliefs}
    kept = [(h, p, d, b) for h, p, n, d, b in qualified_rules(pmcs) if not (n & s)]
    applicable = [(h, p, d) for h, p, d, _ in kept if p <= s]
    if not s <= {h for h, _, _ in applicable}:
        return Decimal(0)
    derived = naive_least_model([(h, p) for h, p, _ in applicable])
    if not all(p <= derived for _, p, _ in applicable):
        return Decimal(0)
    heads = {h for h, p, _, bridge in kept if bridge and p <= s}
    equilibrium = True
    for n, beliefs in zip(names, state):
        local = [(h[1], {a for _, a in p}) for h, p, _, bridge in kept
                 if not bridge and h[0] == n]
        facts = {a for c, a in heads if c == n}
        if naive_least_model(local, facts) != frozenset(beliefs):
            equilibrium = False
    if equilibrium:
        return Decimal(1)
    unsatisfied = [d for h, _, d in applicable if h not in s]
    return 1 - max(unsatisfied) if unsatisfied else Decimal(1)


def brute_necessities(pmcs):
    """N for every qualified atom, maximising pi over every belief state."""
    names = [c.name for c in pmcs.contexts]
    spaces = [list(subsets(c.program.alphabet)) for c in pmcs.contexts]
    atoms = [(n, a) for n, c in zip(names, pmcs.contexts) for a in sorted(c.program.alphabet)]
    best_without = {q: Decimal(0) for q in atoms}
    for combo in itertools.product(*spaces):
        pi = brute_pi(pmcs, combo)
        if pi == 0:
            continue
        present = {(n, a) for n, beliefs in zip(names, combo) for a in beliefs}
        for q in atoms:
            if q not in present and pi > best_without[q]:
                best_without[q] = pi
    return {q: 1 - v for q, v in best_without.items()}


def brute_cycles(nodes, edges):
    """Labelled simple cycles of length >= 2, by trying every node sequence.

    Returns ``(node tuple starting at its smallest node, multiplicity)``.
    """
    labels = {}
    for a, b, g in set(edges):
        labels.setdefault((a, b), set()).add(g)
    nodes = sorted(set(nodes) | {a for a, _, _ in edges} | {b for _, b, _ in edges})
    out = []
    for length in range(2, len(nodes) + 1):
        for seq in itertools.permutations(nodes, length):
            if seq[0] != min(seq):
                continue
            mult = 1
            for i in range(length):
                mult *= len(labels.get((seq[i], seq[(i + 1) % length]), ()))
            if mult:
                out.append((seq, mult))
    return sorted(out)


def brute_consecutive_pairs(nodes, edges):
    """Sum over cycles of the ordered pairs (a, b) with b right after a."""
    return sum(len(c) * m for c, m in brute_cycles(nodes, edges))


def brute_all_ordered_pairs(nodes, edges):
    """Sum over cycles of every ordered pair of distinct members, L(L-1) each."""
    return sum(len(c) * (len(c) - 1) * m for c, m in brute_cycles(nodes, edges))
