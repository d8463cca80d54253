"""Propositional rules and programs with their single-context semantics.

Two acceptability semantics are supported for a context's knowledge base:

* ``answer-set``: normal logic programs under the stable model semantics;
* ``choice-minimal-model``: definite rules plus positive disjunctions
  ("choice clauses") under minimal models, which is how a propositional
  knowledge base such as ``{a_2s, a_1c v a_3c}`` is read under the
  closed-world assumption.

Both may carry denials (``:- a, b.``) that discard otherwise acceptable
belief sets.
"""

from __future__ import annotations

import enum
import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .degree import ONE, Degree
from .errors import AlphabetTooLarge, RuleNotDefinite

DEFAULT_MAX_ATOMS = 24

ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"not", "context", "choice", "atoms"})


def check_atom(name) -> str:
    if not isinstance(name, str) or not ATOM_RE.match(name) or name in RESERVED:
        raise ValueError(f"invalid atom name: {name!r}")
    return name


def _atoms(items) -> frozenset:
    if isinstance(items, str):
        items = (items,)
    return frozenset(check_atom(a) for a in items)


class Semantics(str, enum.Enum):
    ANSWER_SET = "answer-set"
    MINIMAL_MODEL = "choice-minimal-model"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Rule:
    """``head :- pos, not neg [necessity]``.

    ``necessity`` is ``None`` for a classical rule; possibilistic code reads
    ``None`` as full certainty.
    """

    head: str
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()
    necessity: Degree | None = None

    def __post_init__(self):
        check_atom(self.head)
        object.__setattr__(self, "pos", _atoms(self.pos))
        object.__setattr__(self, "neg", _atoms(self.neg))
        if self.necessity is not None and not isinstance(self.necessity, Degree):
            object.__setattr__(self, "necessity", Degree(self.necessity))

    @property
    def atoms(self) -> frozenset:
        return self.pos | self.neg | {self.head}

    @property
    def degree(self) -> Degree:
        return ONE if self.necessity is None else self.necessity

    @property
    def is_fact(self) -> bool:
        return not self.pos and not self.neg

    @property
    def is_definite(self) -> bool:
        return not self.neg

    def positive(self) -> Rule:
        """The positive projection: negative body dropped, degree kept."""
        return Rule(self.head, self.pos, frozenset(), self.necessity)

    def classical(self) -> Rule:
        return Rule(self.head, self.pos, self.neg, None)

    def applicable(self, interpretation) -> bool:
        return self.pos <= interpretation and not (self.neg & interpretation)

    def __str__(self):
        body = sorted(self.pos) + [f"not {a}" for a in sorted(self.neg)]
        text = self.head
        if body:
            text += " :- " + ", ".join(body)
        if self.necessity is not None:
            text += f" [{self.necessity}]"
        return text + "."


def fact(atom: str, necessity=None) -> Rule:
    return Rule(atom, necessity=necessity)


@dataclass(frozen=True)
class ChoiceClause:
    """A nonempty disjunction of atoms, at least one of which must hold."""

    alternatives: tuple

    def __post_init__(self):
        alts = (self.alternatives,) if isinstance(self.alternatives, str) else tuple(self.alternatives)
        if not alts:
            raise ValueError("choice clause needs at least one alternative")
        for a in alts:
            check_atom(a)
        if len(set(alts)) != len(alts):
            raise ValueError(f"duplicate alternative in choice clause {alts}")
        object.__setattr__(self, "alternatives", alts)

    def __str__(self):
        return "choice " + " | ".join(self.alternatives) + "."


@dataclass(frozen=True)
class Constraint:
    """A denial ``:- pos, not neg.``"""

    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pos", _atoms(self.pos))
        object.__setattr__(self, "neg", _atoms(self.neg))
        if not self.pos and not self.neg:
            raise ValueError("empty constraint")

    def violated_by(self, interpretation) -> bool:
        return self.pos <= interpretation and not (self.neg & interpretation)

    def __str__(self):
        body = sorted(self.pos) + [f"not {a}" for a in sorted(self.neg)]
        return ":- " + ", ".join(body) + "."


@dataclass(frozen=True)
class Program:
    """A context knowledge base: rules, choice clauses and denials over an alphabet.

    When ``alphabet`` is omitted it is the set of atoms mentioned anywhere.
    """

    rules: tuple = ()
    choices: tuple = ()
    constraints: tuple = ()
    alphabet: frozenset | None = None
    semantics: Semantics = Semantics.ANSWER_SET

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "choices", tuple(
            c if isinstance(c, ChoiceClause) else ChoiceClause(c) for c in self.choices))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "semantics", Semantics(self.semantics))
        used = set()
        for r in self.rules:
            used |= r.atoms
        for c in self.choices:
            used.update(c.alternatives)
        for c in self.constraints:
            used |= c.pos | c.neg
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", frozenset(used))
        else:
            alphabet = _atoms(self.alphabet)
            missing = used - alphabet
            if missing:
                raise ValueError(f"atoms {sorted(missing)} not in the declared alphabet")
            object.__setattr__(self, "alphabet", alphabet)
        if self.choices and self.semantics is Semantics.ANSWER_SET:
            raise ValueError("choice clauses need choice-minimal-model semantics")
        if self.semantics is Semantics.MINIMAL_MODEL:
            if any(r.neg for r in self.rules):
                raise RuleNotDefinite("minimal-model programs must have definite rules")
            if any(c.neg for c in self.constraints):
                raise RuleNotDefinite("minimal-model denials must be negation-free")

    @property
    def is_definite(self) -> bool:
        return all(r.is_definite for r in self.rules) and not self.choices

    @property
    def facts(self) -> frozenset:
        return frozenset(r.head for r in self.rules if r.is_fact)

    def with_facts(self, atoms: Iterable[str]) -> Program:
        """This program plus extra classical facts (e.g. bridge-rule heads)."""
        atoms = _atoms(atoms)
        if not atoms:
            return self
        extra = tuple(Rule(a) for a in sorted(atoms))
        return Program(self.rules + extra, self.choices, self.constraints,
                       self.alphabet | atoms, self.semantics)

    def classical(self) -> Program:
        return Program(tuple(r.classical() for r in self.rules), self.choices,
                       self.constraints, self.alphabet, self.semantics)

    def __str__(self):
        lines = [str(r) for r in self.rules]
        lines += [str(c) for c in self.choices]
        lines += [str(c) for c in self.constraints]
        return "\n".join(lines)


def _rules_of(program) -> tuple:
    return program.rules if isinstance(program, Program) else tuple(program)


def closure(rules: Iterable, facts: Iterable = ()) -> set:
    """Smallest set containing ``facts`` and closed under ``rules``' positive parts.

    Negative bodies are ignored; callers decide whether that is allowed.
    Atoms may be any hashable, which lets the MCS layer close over
    context-qualified atoms.
    """
    model = set(facts)
    heads = []
    missing = []
    waiting = defaultdict(list)
    queue = []
    for idx, (head, body) in enumerate(rules):
        heads.append(head)
        need = set(body) - model
        missing.append(len(need))
        for b in need:
            waiting[b].append(idx)
        if not need and head not in model:
            model.add(head)
            queue.append(head)
    while queue:
        atom = queue.pop()
        for idx in waiting.pop(atom, ()):
            missing[idx] -= 1
            if missing[idx] == 0 and heads[idx] not in model:
                model.add(heads[idx])
                queue.append(heads[idx])
    return model


def _pairs(rules) -> list:
    return [(r.head, r.pos) for r in rules]


def least_model(program, extra_facts: Iterable[str] = ()) -> frozenset:
    """The subset-least set of atoms closed under a definite program.

    Denials are not consulted.
    """
    if isinstance(program, Program) and program.choices:
        raise RuleNotDefinite("least_model is undefined for programs with choice clauses")
    rules = _rules_of(program)
    for r in rules:
        if r.neg:
            raise RuleNotDefinite(f"rule {r} has a negative body")
    return frozenset(closure(_pairs(rules), extra_facts))


def reduct(program, interpretation) -> Program | tuple:
    """Keep rules whose negative body misses ``interpretation``, as positive projections.

    Choice clauses are left untouched; denials are reduced like rules.
    Degrees are preserved.
    """
    interpretation = frozenset(interpretation)
    kept = tuple(r.positive() for r in _rules_of(program) if not (r.neg & interpretation))
    if not isinstance(program, Program):
        return kept
    constraints = tuple(Constraint(c.pos) for c in program.constraints
                        if not (c.neg & interpretation) and c.pos)
    return Program(kept, program.choices, constraints, program.alphabet, program.semantics)


def applicable_rules(program, interpretation) -> tuple:
    interpretation = frozenset(interpretation)
    return tuple(r for r in _rules_of(program) if r.applicable(interpretation))


def is_grounded_ruleset(rules: Iterable[Rule]) -> bool:
    """True iff the rules can be sequenced so each body is derived by earlier heads.

    Only positive bodies are considered.
    """
    pending = list(rules)
    derived = set()
    progress = True
    while pending and progress:
        progress = False
        rest = []
        for r in pending:
            if r.pos <= derived:
                derived.add(r.head)
                progress = True
            else:
                rest.append(r)
        pending = rest
    return not pending


def state_key(interpretation, alphabet) -> tuple:
    """Sort key: characteristic vector over the sorted alphabet, absent before present."""
    return tuple(a in interpretation for a in sorted(alphabet))


def _check_bound(program: Program, max_atoms: int | None):
    limit = DEFAULT_MAX_ATOMS if max_atoms is None else max_atoms
    if len(program.alphabet) > limit:
        raise AlphabetTooLarge(
            f"alphabet has {len(program.alphabet)} atoms, enumeration bound is {limit}")


def _satisfies_constraints(program: Program, interpretation) -> bool:
    return not any(c.violated_by(interpretation) for c in program.constraints)


def answer_sets(program: Program, max_atoms: int | None = None) -> list:
    """All answer sets of a normal program, ordered by :func:`state_key`.

    An answer set is fixed by its intersection with the atoms that occur
    negatively, so only those are guessed.
    """
    if program.semantics is not Semantics.ANSWER_SET:
        raise ValueError("answer_sets needs an answer-set program")
    _check_bound(program, max_atoms)
    negated = sorted(set().union(*(r.neg for r in program.rules)) if program.rules else set())
    pairs = [(r.head, r.pos, r.neg) for r in program.rules]
    found = set()
    for bits in itertools.product((False, True), repeat=len(negated)):
        guess = frozenset(a for a, b in zip(negated, bits) if b)
        kept = [(h, p) for h, p, n in pairs if not (n & guess)]
        candidate = frozenset(closure(kept))
        if candidate & frozenset(negated) == guess and _satisfies_constraints(program, candidate):
            found.add(candidate)
    return sorted(found, key=lambda s: state_key(s, program.alphabet))


def _is_model(program: Program, interpretation) -> bool:
    for r in program.rules:
        if r.pos <= interpretation and r.head not in interpretation:
            return False
    for c in program.choices:
        if not any(a in interpretation for a in c.alternatives):
            return False
    return True


def _choice_branches(program: Program, pairs, start, allowed=None) -> Iterator[frozenset]:
    """Closed sets reachable by resolving unmet choice clauses one alternative at a time."""
    stack = [frozenset(closure(pairs, start))]
    seen = set()
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        unmet = next((c for c in program.choices
                      if not any(a in current for a in c.alternatives)), None)
        if unmet is None:
            yield current
            continue
        for alt in unmet.alternatives:
            if allowed is None or alt in allowed:
                stack.append(frozenset(closure(pairs, current | {alt})))


def _antichain(sets) -> list:
    sets = sorted(set(sets), key=len)
    minimal = []
    for s in sets:
        if not any(m <= s for m in minimal):
            minimal.append(s)
    return minimal


def minimal_models(program: Program, max_atoms: int | None = None) -> list:
    """All subset-minimal models of definite rules plus choice clauses, minus denials.

    Denials here are negation-free, so filtering minimal models of the rest
    gives the minimal models of the whole theory.
    """
    if program.semantics is not Semantics.MINIMAL_MODEL:
        raise ValueError("minimal_models needs a choice-minimal-model program")
    _check_bound(program, max_atoms)
    pairs = _pairs(program.rules)
    candidates = _antichain(_choice_branches(program, pairs, ()))
    models = [m for m in candidates if _satisfies_constraints(program, m)]
    return sorted(models, key=lambda s: state_key(s, program.alphabet))


def acceptable_sets(program: Program, max_atoms: int | None = None) -> list:
    """ACC(program): answer sets or minimal models according to the semantics tag."""
    if program.semantics is Semantics.ANSWER_SET:
        return answer_sets(program, max_atoms)
    return minimal_models(program, max_atoms)


def is_acceptable(program: Program, interpretation) -> bool:
    """Membership test ``interpretation in ACC(program)`` without enumerating ACC."""
    interpretation = frozenset(interpretation)
    if not interpretation <= program.alphabet:
        return False
    if not _satisfies_constraints(program, interpretation):
        return False
    if program.semantics is Semantics.ANSWER_SET:
        kept = [(r.head, r.pos) for r in program.rules if not (r.neg & interpretation)]
        return frozenset(closure(kept)) == interpretation
    if not _is_model(program, interpretation):
        return False
    # every model inside a model is reachable by choosing alternatives from it
    pairs = _pairs(program.rules)
    return all(m == interpretation
               for m in _choice_branches(program, pairs, (), allowed=interpretation))
