"""Possibilistic multi-context systems.

A possibilistic MCS is an :class:`~mcsc.mcs.Mcs` whose rules carry necessity
degrees (a missing degree means 1). The possibility of a belief state is
evaluated against the reduct of the system by that same state, which for a
definite system is the system itself. Atom possibility and necessity are
obtained by exhaustive evaluation of that distribution; the grounded
equilibrium is computed by a max-min fixpoint that agrees with the exhaustive
evaluation (see ``tests/test_poss.py``).
"""

from __future__ import annotations

import types
from dataclasses import dataclass

import numpy as np

from . import logic
from .degree import ONE, SCALE, ZERO, Degree
from .errors import NotDefinite, SearchSpaceExceeded
from .mcs import BeliefState, Mcs, _qualified_rules, enumerate_equilibria, is_equilibrium, mcs_reduct

_CHUNK = 1 << 16


def poss_reduct(pmcs: Mcs, state) -> Mcs:
    """Possibilistic reduct: the MCS reduct with necessity degrees preserved."""
    return mcs_reduct(pmcs, state)


class PossBeliefState(tuple):
    """One read-only ``{atom: necessity}`` mapping per context."""

    def __new__(cls, sets=()):
        frozen = []
        for s in sets:
            items = s.items() if hasattr(s, "items") else s
            frozen.append(types.MappingProxyType(
                {a: d if isinstance(d, Degree) else Degree(d) for a, d in sorted(items)}))
        return super().__new__(cls, frozen)

    def classical(self) -> BeliefState:
        return BeliefState(set(s) for s in self)

    def __eq__(self, other):
        if not isinstance(other, tuple) or len(other) != len(self):
            return False
        return all(dict(a) == dict(b) for a, b in zip(self, other))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        parts = []
        for s in self:
            parts.append("{" + ", ".join(f"({a}, {d})" for a, d in s.items()) + "}")
        return "PossBeliefState((" + ", ".join(parts) + "))"


def _require_plain(pmcs: Mcs):
    for ctx in pmcs.contexts:
        if ctx.program.choices or ctx.program.constraints:
            raise NotDefinite(
                f"context {ctx.name} has choice clauses or denials; pass a reduct instead")


def possibility_of_state(pmcs: Mcs, state) -> Degree:
    """pi(S), evaluated on the reduct of ``pmcs`` by S.

    0 if S is not covered by the heads of the applicable rules or those rules
    are not grounded, 1 if S is an equilibrium, otherwise one minus the
    largest necessity of a rule whose body holds in S but whose head does not.
    """
    _require_plain(pmcs)
    state = BeliefState(state)
    if len(state) != len(pmcs.contexts):
        raise ValueError(f"state has {len(state)} belief sets for {len(pmcs.contexts)} contexts")
    reduced = mcs_reduct(pmcs, state)
    qualified = {(i, a) for i, s in enumerate(state) for a in s}
    rules = _qualified_rules(reduced)
    applicable = [(h, p, d) for h, p, _, d in rules if p <= qualified]
    if not qualified <= {h for h, _, _ in applicable}:
        return ZERO
    if not logic.is_grounded_ruleset(_Qrule(h, p) for h, p, _ in applicable):
        return ZERO
    if is_equilibrium(reduced.classical(), state):
        return ONE
    unsatisfied = [d for h, p, d in applicable if h not in qualified]
    return max(unsatisfied).complement() if unsatisfied else ONE


class _Qrule:
    """Minimal rule shape accepted by :func:`logic.is_grounded_ruleset`."""

    __slots__ = ("head", "pos")

    def __init__(self, head, pos):
        self.head = head
        self.pos = pos


@dataclass
class _Space:
    atoms: list          # qualified atoms, bit i <-> atoms[i]
    head: np.ndarray     # per rule: head bit mask
    pos: np.ndarray      # per rule: positive body mask
    neg: np.ndarray      # per rule: negative body mask
    degree: np.ndarray   # per rule: necessity in millionths


def _state_space(pmcs: Mcs, max_atoms: int | None) -> _Space:
    """Atoms that can occur in a state of nonzero possibility.

    Such a state lies inside the least model of the reduct by itself, which is
    contained in the least model of the positive projection of the system.
    """
    _require_plain(pmcs)
    rules = _qualified_rules(pmcs)
    universe = sorted(logic.closure([(h, p) for h, p, _, _ in rules]),
                      key=lambda q: (q[0], q[1]))
    limit = logic.DEFAULT_MAX_ATOMS if max_atoms is None else max_atoms
    if len(universe) > limit:
        raise SearchSpaceExceeded(
            f"{len(universe)} derivable atoms give 2^{len(universe)} states, bound is 2^{limit}")
    bit = {q: 1 << i for i, q in enumerate(universe)}
    head, pos, neg, degree = [], [], [], []
    for h, p, n, d in rules:
        if not p <= bit.keys():
            continue
        head.append(bit[h])
        pos.append(sum(bit[q] for q in p))
        neg.append(sum(bit[q] for q in n if q in bit))
        degree.append(d.micro)
    as_array = lambda xs: np.array(xs, dtype=np.int64)
    return _Space(universe, as_array(head), as_array(pos), as_array(neg), as_array(degree))


def _pi_chunk(space: _Space, states: np.ndarray) -> np.ndarray:
    """Vectorised pi over a block of states encoded as bit masks; millionths."""
    s = states[:, None]
    present = (s & space.neg) == 0
    applicable = present & ((s & space.pos) == space.pos)
    covered = np.bitwise_or.reduce(np.where(applicable, space.head, 0), axis=1)
    supported = (states & ~covered) == 0
    derived = np.zeros_like(states)
    while True:
        fire = applicable & ((derived[:, None] & space.pos) == space.pos)
        nxt = derived | np.bitwise_or.reduce(np.where(fire, space.head, 0), axis=1)
        if np.array_equal(nxt, derived):
            break
        derived = nxt
    grounded = np.all(~applicable | ((derived[:, None] & space.pos) == space.pos), axis=1)
    unsat = applicable & ((s & space.head) == 0)
    worst = np.max(np.where(unsat, space.degree, 0), axis=1, initial=0)
    pi = SCALE - worst
    pi = np.where(unsat.any(axis=1), pi, SCALE)
    return np.where(supported & grounded, pi, 0)


def possibility_distribution(pmcs: Mcs, max_atoms: int | None = None):
    """Yield ``(state mask block, pi block)`` over every subset of the state space.

    Returns the qualified atom list first; see :func:`necessities` for a consumer.
    """
    space = _state_space(pmcs, max_atoms)
    total = 1 << len(space.atoms)

    def blocks():
        if len(space.head) == 0:
            states = np.arange(total, dtype=np.int64)
            yield states, np.where(states == 0, SCALE, 0)
            return
        for start in range(0, total, _CHUNK):
            states = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            yield states, _pi_chunk(space, states)

    return space.atoms, blocks()


def _possibility_and_necessity(pmcs: Mcs, max_atoms):
    atoms, blocks = possibility_distribution(pmcs, max_atoms)
    best_with = np.zeros(len(atoms), dtype=np.int64)
    best_without = np.zeros(len(atoms), dtype=np.int64)
    for states, pi in blocks:
        for i in range(len(atoms)):
            has = (states >> i) & 1 == 1
            if has.any():
                best_with[i] = max(best_with[i], int(pi[has].max()))
            if (~has).any():
                best_without[i] = max(best_without[i], int(pi[~has].max()))
    poss = {q: Degree.from_micro(int(best_with[i])) for i, q in enumerate(atoms)}
    nec = {q: Degree.from_micro(SCALE - int(best_without[i])) for i, q in enumerate(atoms)}
    return poss, nec


def _lookup(pmcs: Mcs, table: dict, context: str, atom: str) -> Degree:
    return table.get((pmcs.index(context), atom), ZERO)


def atom_possibility(pmcs: Mcs, context: str, atom: str, max_atoms: int | None = None) -> Degree:
    """Max pi over states whose belief set for ``context`` contains ``atom``."""
    poss, _ = _possibility_and_necessity(pmcs, max_atoms)
    return _lookup(pmcs, poss, context, atom)


def atom_necessity(pmcs: Mcs, context: str, atom: str, max_atoms: int | None = None) -> Degree:
    """One minus the max pi over states whose belief set for ``context`` lacks ``atom``."""
    _, nec = _possibility_and_necessity(pmcs, max_atoms)
    return _lookup(pmcs, nec, context, atom)


def necessities(pmcs: Mcs, max_atoms: int | None = None) -> PossBeliefState:
    """Every atom with positive necessity, by exhaustive evaluation of pi."""
    _, nec = _possibility_and_necessity(pmcs, max_atoms)
    sets = [{} for _ in pmcs.contexts]
    for (i, atom), d in nec.items():
        if d > ZERO:
            sets[i][atom] = d
    return PossBeliefState(sets)


def _fixpoint(pmcs: Mcs) -> dict:
    """Max-min propagation: best over derivations of the weakest rule used."""
    rules = [(h, p, d.micro) for h, p, _, d in _qualified_rules(pmcs)]
    value = {}
    changed = True
    while changed:
        changed = False
        for head, body, degree in rules:
            if not all(b in value for b in body):
                continue
            strength = min([degree] + [value[b] for b in body])
            if strength > value.get(head, 0):
                value[head] = strength
                changed = True
    return value


def poss_grounded_equilibrium(pmcs: Mcs, method: str = "fixpoint",
                              max_atoms: int | None = None) -> PossBeliefState:
    """Atoms of a definite possibilistic MCS annotated with their necessity (> 0 only).

    ``method="enumerate"`` evaluates the definition over the whole state space
    instead of the fixpoint.
    """
    if not pmcs.is_definite:
        raise NotDefinite("poss_grounded_equilibrium needs a definite possibilistic MCS")
    if method == "enumerate":
        return necessities(pmcs, max_atoms)
    if method != "fixpoint":
        raise ValueError(f"unknown method {method!r}")
    sets = [{} for _ in pmcs.contexts]
    for (i, atom), micro in _fixpoint(pmcs).items():
        if micro > 0:
            sets[i][atom] = Degree.from_micro(micro)
    return PossBeliefState(sets)


def poss_equilibria(pmcs: Mcs, max_atoms: int | None = None, method: str = "fixpoint",
                    max_candidates: int | None = None) -> list:
    """Possibilistic equilibria of a normal possibilistic MCS.

    For each equilibrium S of the classical projection, the grounded
    possibilistic equilibrium of the reduct by S is kept when its projection
    is S again.
    """
    kwargs = {} if max_candidates is None else {"max_candidates": max_candidates}
    out = []
    for state in enumerate_equilibria(pmcs.classical(), max_atoms, **kwargs):
        annotated = poss_grounded_equilibrium(poss_reduct(pmcs, state), method, max_atoms)
        if annotated.classical() == state:
            out.append(annotated)
    return out
