"""Multi-context systems: contexts, bridge rules, belief states and equilibria."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import logic
from .degree import ONE, Degree
from .errors import NotDefinite, SearchSpaceExceeded, UnknownContext
from .logic import Program, Rule, Semantics, check_atom

DEFAULT_MAX_CANDIDATES = 10**6


@dataclass(frozen=True)
class Context:
    name: str
    program: Program

    def __post_init__(self):
        check_atom(self.name)

    @property
    def alphabet(self) -> frozenset:
        return self.program.alphabet


def _literals(items) -> frozenset:
    out = set()
    for ctx, atom in items:
        out.add((check_atom(ctx), check_atom(atom)))
    return frozenset(out)


@dataclass(frozen=True)
class BridgeRule:
    """``(target:head) :- (c:p), ..., not (c:q), ... [necessity]``."""

    target: str
    head: str
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()
    necessity: Degree | None = None

    def __post_init__(self):
        check_atom(self.target)
        check_atom(self.head)
        object.__setattr__(self, "pos", _literals(self.pos))
        object.__setattr__(self, "neg", _literals(self.neg))
        if self.necessity is not None and not isinstance(self.necessity, Degree):
            object.__setattr__(self, "necessity", Degree(self.necessity))

    @property
    def degree(self) -> Degree:
        return ONE if self.necessity is None else self.necessity

    @property
    def is_definite(self) -> bool:
        return not self.neg

    def contexts(self) -> set:
        return {self.target} | {c for c, _ in self.pos | self.neg}

    def positive(self) -> BridgeRule:
        return BridgeRule(self.target, self.head, self.pos, frozenset(), self.necessity)

    def classical(self) -> BridgeRule:
        return BridgeRule(self.target, self.head, self.pos, self.neg, None)

    def __str__(self):
        body = [f"({c}:{a})" for c, a in sorted(self.pos)]
        body += [f"not ({c}:{a})" for c, a in sorted(self.neg)]
        text = f"({self.target}:{self.head})"
        if body:
            text += " :- " + ", ".join(body)
        if self.necessity is not None:
            text += f" [{self.necessity}]"
        return text + "."


def with_bridge_atoms(contexts: Iterable[Context], bridge_rules: Iterable[BridgeRule]) -> tuple:
    """Contexts whose alphabets also cover the bridge atoms that mention them."""
    contexts = tuple(contexts)
    extra = {c.name: set() for c in contexts}
    for br in bridge_rules:
        if br.target in extra:
            extra[br.target].add(br.head)
        for c, a in br.pos | br.neg:
            if c in extra:
                extra[c].add(a)
    out = []
    for c in contexts:
        p = c.program
        out.append(Context(c.name, Program(p.rules, p.choices, p.constraints,
                                           p.alphabet | extra[c.name], p.semantics)))
    return tuple(out)


class BeliefState(tuple):
    """One belief set (a frozenset of atoms) per context, in context order."""

    def __new__(cls, sets: Iterable[Iterable[str]] = ()):
        return super().__new__(cls, (frozenset(s) for s in sets))

    def __repr__(self):
        inner = ", ".join("{" + ", ".join(sorted(s)) + "}" for s in self)
        return f"BeliefState(({inner}))"

    __str__ = __repr__

    def as_lists(self) -> list:
        return [sorted(s) for s in self]


@dataclass(frozen=True)
class Mcs:
    """A multi-context system; a possibilistic one when rules carry degrees."""

    contexts: tuple = ()
    bridge_rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "contexts", tuple(self.contexts))
        object.__setattr__(self, "bridge_rules", tuple(self.bridge_rules))
        names = [c.name for c in self.contexts]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate context names in {names}")
        index = {n: i for i, n in enumerate(names)}
        for br in self.bridge_rules:
            unknown = sorted(br.contexts() - index.keys())
            if unknown:
                raise UnknownContext(f"bridge rule {br} references unknown context {unknown[0]}")
            if br.head not in self.contexts[index[br.target]].alphabet:
                raise ValueError(
                    f"bridge head {br.head} is not in the alphabet of context {br.target}")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.contexts)

    @property
    def names(self) -> tuple:
        return tuple(c.name for c in self.contexts)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownContext(f"no context named {name}") from None

    def context(self, name: str) -> Context:
        return self.contexts[self.index(name)]

    def bridge_rules_for(self, name: str) -> tuple:
        return tuple(br for br in self.bridge_rules if br.target == name)

    @property
    def is_possibilistic(self) -> bool:
        return (any(br.necessity is not None for br in self.bridge_rules)
                or any(r.necessity is not None for c in self.contexts for r in c.program.rules))

    @property
    def is_definite(self) -> bool:
        return (all(br.is_definite for br in self.bridge_rules)
                and all(c.program.is_definite and not c.program.constraints for c in self.contexts))

    def classical(self) -> Mcs:
        return Mcs(tuple(Context(c.name, c.program.classical()) for c in self.contexts),
                   tuple(br.classical() for br in self.bridge_rules))

    def state(self, sets: dict | Sequence) -> BeliefState:
        """Build a belief state from a sequence or a ``{context name: atoms}`` mapping."""
        if isinstance(sets, dict):
            unknown = set(sets) - set(self.names)
            if unknown:
                raise UnknownContext(f"no context named {sorted(unknown)[0]}")
            return BeliefState(sets.get(n, ()) for n in self.names)
        if len(sets) != len(self.contexts):
            raise ValueError(f"expected {len(self.contexts)} belief sets, got {len(sets)}")
        return BeliefState(sets)

    def state_key(self, state) -> tuple:
        return tuple(logic.state_key(s, c.alphabet) for s, c in zip(state, self.contexts))

    def sort_states(self, states) -> list:
        return sorted(states, key=self.state_key)

    def __str__(self):
        from .parsing import print_mcs
        return print_mcs(self)


def _holds(literal, state, index) -> bool:
    ctx, atom = literal
    return atom in state[index[ctx]]


def bridge_applicable(rule: BridgeRule, state, index) -> bool:
    return (all(_holds(l, state, index) for l in rule.pos)
            and not any(_holds(l, state, index) for l in rule.neg))


def applicable_bridge_heads(mcs: Mcs, state) -> tuple:
    """Per context, the heads of bridge rules applicable in ``state``."""
    if len(state) != len(mcs.contexts):
        raise ValueError(f"state has {len(state)} belief sets for {len(mcs.contexts)} contexts")
    heads = [set() for _ in mcs.contexts]
    for br in mcs.bridge_rules:
        if bridge_applicable(br, state, mcs._index):
            heads[mcs._index[br.target]].add(br.head)
    return tuple(frozenset(h) for h in heads)


def failed_contexts(mcs: Mcs, state) -> list:
    """Names of contexts whose belief set is not acceptable given the applicable heads."""
    heads = applicable_bridge_heads(mcs, state)
    return [ctx.name for ctx, s, h in zip(mcs.contexts, state, heads)
            if not logic.is_acceptable(ctx.program.with_facts(h), s)]


def is_equilibrium(mcs: Mcs, state) -> bool:
    """True iff every S_i is in ACC_i(kb_i plus the applicable bridge heads)."""
    if len(state) != len(mcs.contexts):
        return False
    return not failed_contexts(mcs, state)


def _candidates(mcs: Mcs, max_atoms) -> list:
    """Per context: ACC of kb_i extended by each subset of its incoming bridge heads."""
    limit = logic.DEFAULT_MAX_ATOMS if max_atoms is None else max_atoms
    per_context = []
    for ctx in mcs.contexts:
        heads = sorted({br.head for br in mcs.bridge_rules_for(ctx.name)})
        if len(heads) > limit:
            raise SearchSpaceExceeded(
                f"context {ctx.name} has {len(heads)} incoming bridge heads, bound is {limit}")
        found = set()
        for r in range(len(heads) + 1):
            for subset in itertools.combinations(heads, r):
                found.update(logic.acceptable_sets(ctx.program.with_facts(subset), max_atoms))
        per_context.append(sorted(found, key=lambda s: logic.state_key(s, ctx.alphabet)))
    return per_context


class _Verifier:
    """Equilibrium check with the per-context acceptance tests memoised."""

    def __init__(self, mcs: Mcs):
        self.mcs = mcs
        self.cache = {}

    def failed(self, state) -> list:
        heads = applicable_bridge_heads(self.mcs, state)
        failed = []
        for i, (ctx, s, h) in enumerate(zip(self.mcs.contexts, state, heads)):
            if not self.accepts(i, s, h):
                failed.append(ctx.name)
        return failed

    def accepts(self, i: int, beliefs: frozenset, heads: frozenset) -> bool:
        key = (i, beliefs, heads)
        ok = self.cache.get(key)
        if ok is None:
            program = self.mcs.contexts[i].program.with_facts(heads)
            ok = self.cache[key] = logic.is_acceptable(program, beliefs)
        return ok


def verify_candidates(mcs: Mcs, max_atoms: int | None = None,
                      max_candidates: int = DEFAULT_MAX_CANDIDATES) -> Iterator[tuple]:
    """Yield ``(state, failed context names)`` for every candidate belief state."""
    per_context = _candidates(mcs, max_atoms)
    total = math.prod(len(c) for c in per_context)
    if total > max_candidates:
        raise SearchSpaceExceeded(
            f"{total} candidate belief states exceed the bound of {max_candidates}")
    verifier = _Verifier(mcs)
    for combo in itertools.product(*per_context):
        state = BeliefState(combo)
        yield state, verifier.failed(state)


def _search(mcs: Mcs, per_context: list, max_candidates: int) -> list:
    """Depth-first walk of the candidate product in context order.

    A partial state is abandoned as soon as a bridge rule whose body and
    target are assigned is applicable but its head is missing from the target
    (acceptable sets contain their facts), or once every bridge rule into an
    assigned context is decided and that context rejects its belief set.
    """
    n = len(mcs.contexts)
    index = mcs._index
    decided_at = [[] for _ in range(n)]
    complete = list(range(n))
    for br in mcs.bridge_rules:
        target = index[br.target]
        level = max([target] + [index[c] for c, _ in br.pos | br.neg])
        decided_at[level].append((br, target))
        complete[target] = max(complete[target], level)
    check_at = [[] for _ in range(n)]
    for i, level in enumerate(complete):
        check_at[level].append(i)
    verifier = _Verifier(mcs)
    state = [frozenset()] * n
    found = []
    visited = 0

    def accepted(i):
        heads = frozenset(br.head for br in mcs.bridge_rules_for(mcs.contexts[i].name)
                          if bridge_applicable(br, state, index))
        return verifier.accepts(i, state[i], heads)

    def extend(k):
        nonlocal visited
        if k == n:
            found.append(BeliefState(state))
            return
        for s in per_context[k]:
            visited += 1
            if visited > max_candidates:
                raise SearchSpaceExceeded(
                    f"more than {max_candidates} partial belief states visited")
            state[k] = s
            if all(br.head in state[t] for br, t in decided_at[k]
                   if bridge_applicable(br, state, index)) and \
                    all(accepted(i) for i in check_at[k]):
                extend(k + 1)
        state[k] = frozenset()

    extend(0)
    return found


def enumerate_equilibria(mcs: Mcs, max_atoms: int | None = None,
                         max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list:
    """All equilibria, ordered by :meth:`Mcs.state_key`.

    Searches the same candidate space as :func:`verify_candidates` but prunes
    partial states; ``max_candidates`` bounds the number of states visited.
    """
    found = _search(mcs, _candidates(mcs, max_atoms), max_candidates)
    return mcs.sort_states(set(found))


def _qualified_rules(mcs: Mcs) -> list:
    """Every local and bridge rule as (head, pos, neg, degree) over (context index, atom)."""
    out = []
    for i, ctx in enumerate(mcs.contexts):
        for r in ctx.program.rules:
            out.append(((i, r.head), frozenset((i, a) for a in r.pos),
                        frozenset((i, a) for a in r.neg), r.degree))
    for br in mcs.bridge_rules:
        out.append(((mcs._index[br.target], br.head),
                    frozenset((mcs._index[c], a) for c, a in br.pos),
                    frozenset((mcs._index[c], a) for c, a in br.neg), br.degree))
    return out


def _split(mcs: Mcs, qualified) -> BeliefState:
    sets = [set() for _ in mcs.contexts]
    for i, atom in qualified:
        sets[i].add(atom)
    return BeliefState(sets)


def _qualify(state) -> set:
    return {(i, a) for i, s in enumerate(state) for a in s}


def grounded_equilibrium(mcs: Mcs) -> BeliefState:
    """The joint least fixpoint of a definite, negation-free MCS."""
    if not mcs.is_definite:
        raise NotDefinite("grounded_equilibrium needs definite programs and bridge rules "
                          "without negation, choice clauses or denials")
    pairs = [(h, p) for h, p, _, _ in _qualified_rules(mcs)]
    return _split(mcs, logic.closure(pairs))


def mcs_reduct(mcs: Mcs, state) -> Mcs:
    """Reduct w.r.t. a belief state.

    Context programs are reduced by their own belief set, bridge rules by the
    whole state. Choice clauses become facts for the alternatives the belief
    set selected; denials are dropped. Degrees are kept.
    """
    index = mcs._index
    contexts = []
    for ctx, s in zip(mcs.contexts, state):
        p = ctx.program
        rules = [r.positive() for r in p.rules if not (r.neg & s)]
        chosen = sorted({a for c in p.choices for a in c.alternatives if a in s})
        rules += [Rule(a) for a in chosen if all(not (r.is_fact and r.head == a) for r in rules)]
        contexts.append(Context(ctx.name, Program(tuple(rules), (), (), p.alphabet,
                                                  Semantics.ANSWER_SET)))
    bridges = tuple(br.positive() for br in mcs.bridge_rules
                    if not any(_holds(l, state, index) for l in br.neg))
    return Mcs(tuple(contexts), bridges)


def grounded_equilibria(mcs: Mcs, max_atoms: int | None = None,
                        max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list:
    """Equilibria S with S equal to the grounded equilibrium of the reduct by S."""
    return [s for s in enumerate_equilibria(mcs, max_atoms, max_candidates)
            if grounded_equilibrium(mcs_reduct(mcs, s)) == s]


@dataclass
class ConsistencyReport:
    consistent: bool
    equilibria: list
    failures: list = field(default_factory=list)
    repairs: list = field(default_factory=list)


def check_consistency(mcs: Mcs, max_atoms: int | None = None,
                      max_candidates: int = DEFAULT_MAX_CANDIDATES,
                      suggest_repairs: bool = False) -> ConsistencyReport:
    """Enumerate equilibria and record, per rejected candidate, which contexts failed.

    With ``suggest_repairs`` an inconsistent system is retried with each bridge
    rule removed in turn; indices whose removal restores an equilibrium are
    reported. No repair is ever chosen.
    """
    equilibria, failures = [], []
    for state, failed in verify_candidates(mcs, max_atoms, max_candidates):
        if failed:
            failures.append((state, failed))
        else:
            equilibria.append(state)
    equilibria = mcs.sort_states(set(equilibria))
    report = ConsistencyReport(bool(equilibria), equilibria, failures)
    if suggest_repairs and not equilibria:
        for i in range(len(mcs.bridge_rules)):
            reduced = Mcs(mcs.contexts, mcs.bridge_rules[:i] + mcs.bridge_rules[i + 1:])
            if enumerate_equilibria(reduced, max_atoms, max_candidates):
                report.repairs.append(i)
    return report
