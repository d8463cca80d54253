"""Compile agent/goal/plan problems into multi-context systems and read coalitions back.

Each agent becomes a context whose knowledge base lists the actions it can
certainly perform and choice clauses over the objects it might carry. Each
plan becomes a bridge rule deriving its goal in the achiever's context.
Exclusion groups make sure no material is carried by two agents in the same
belief state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Mapping

from .degree import ONE, ZERO, Degree
from .errors import (AmbiguousPlan, MissingDistance, MissingPossibility, SchemaError,
                     UnknownAction, UnknownAgent)
from .logic import ChoiceClause, Constraint, Program, Rule, Semantics, check_atom
from .mcs import BeliefState, BridgeRule, Context, Mcs, with_bridge_atoms

AUX_PREFIX = "carriesElse_"
DEFAULT_PICKUP = Decimal("0.001")
DEFAULT_DELIVERY = Decimal("0.002")
WEIGHT_TOLERANCE = 1e-6


def carries_else(material: str) -> str:
    """Atom meaning "some other agent carries ``material``"."""
    return check_atom(AUX_PREFIX + material)


def _number(value) -> Decimal:
    if isinstance(value, bool):
        raise TypeError("bool is not a distance")
    dec = Decimal(repr(value)) if isinstance(value, float) else Decimal(value)
    if not dec.is_finite() or dec < 0:
        raise ValueError(f"distance must be a nonnegative number, got {value!r}")
    return dec


@dataclass(frozen=True)
class AgentSpec:
    id: str
    actions: tuple = ()
    choices: tuple = ()

    def __post_init__(self):
        check_atom(self.id)
        actions = tuple(check_atom(a) for a in self.actions)
        if len(set(actions)) != len(actions):
            raise ValueError(f"agent {self.id} lists an action twice")
        choices = tuple(c if isinstance(c, ChoiceClause) else ChoiceClause(tuple(c))
                        for c in self.choices)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "choices", choices)

    @property
    def capabilities(self) -> frozenset:
        """Every action the agent may perform, certain or chosen."""
        out = set(self.actions)
        for c in self.choices:
            out.update(c.alternatives)
        return frozenset(out)


@dataclass(frozen=True)
class Plan:
    """An ordered list of ``(agent, action)`` steps achieving one goal.

    ``achiever`` is the carry step; it defaults to the last step. A given
    ``possibility`` replaces the product of step possibilities.
    """

    id: str
    goal: str
    steps: tuple
    achiever: tuple | None = None
    possibility: Degree | None = None

    def __post_init__(self):
        check_atom(self.id)
        check_atom(self.goal)
        steps = tuple((check_atom(a), check_atom(x)) for a, x in self.steps)
        if not steps:
            raise ValueError(f"plan {self.id} has no steps")
        achiever = steps[-1] if self.achiever is None else tuple(self.achiever)
        if steps.count(achiever) != 1:
            raise ValueError(f"plan {self.id} must contain its achiever step {achiever} exactly once")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "achiever", achiever)
        if self.possibility is not None and not isinstance(self.possibility, Degree):
            object.__setattr__(self, "possibility", Degree(self.possibility))

    @property
    def achiever_agent(self) -> str:
        return self.achiever[0]


@dataclass(frozen=True)
class ExclusionGroup:
    """Carry actions, one per agent, that move the same material."""

    material: str
    carry_actions: tuple

    def __post_init__(self):
        check_atom(self.material)
        items = self.carry_actions.items() if isinstance(self.carry_actions, Mapping) \
            else self.carry_actions
        pairs = tuple(sorted((check_atom(a), check_atom(x)) for a, x in items))
        agents = [a for a, _ in pairs]
        if len(set(agents)) != len(agents):
            raise ValueError(f"exclusion group {self.material} lists an agent twice")
        object.__setattr__(self, "carry_actions", pairs)

    @property
    def atom(self) -> str:
        return carries_else(self.material)


def _pair_table(table) -> dict:
    """Accept ``{(a, m): d}`` or nested ``{a: {m: d}}``."""
    out = {}
    for key, value in table.items():
        if isinstance(value, Mapping):
            for inner, d in value.items():
                out[(key, inner)] = _number(d)
        else:
            out[tuple(key)] = _number(value)
    return out


@dataclass(frozen=True)
class DistanceTable:
    agent_to_material: dict = field(default_factory=dict)
    material_to_destination: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "agent_to_material", _pair_table(self.agent_to_material))
        object.__setattr__(self, "material_to_destination",
                           {m: _number(d) for m, d in self.material_to_destination.items()})

    def pickup(self, agent: str, material: str) -> Decimal:
        try:
            return self.agent_to_material[(agent, material)]
        except KeyError:
            raise MissingDistance(f"no distance from {agent} to {material}") from None

    def delivery(self, material: str) -> Decimal:
        try:
            return self.material_to_destination[material]
        except KeyError:
            raise MissingDistance(f"no distance from {material} to its destination") from None

    def trip(self, agent: str, material: str) -> Decimal:
        """Distance covered by ``agent`` fetching ``material`` and delivering it."""
        return self.pickup(agent, material) + self.delivery(material)


@dataclass(frozen=True)
class UncertaintyModel:
    """How sure we are that an agent completes a carry action.

    ``linear_distance`` loses ``pickup_coeff`` per unit to the material and
    ``delivery_coeff`` per unit to the destination; ``explicit`` looks the
    degree up by ``(agent, action)``.
    """

    kind: str = "linear_distance"
    explicit: dict = field(default_factory=dict)
    pickup_coeff: Decimal = DEFAULT_PICKUP
    delivery_coeff: Decimal = DEFAULT_DELIVERY

    def __post_init__(self):
        if self.kind not in ("linear_distance", "explicit"):
            raise ValueError(f"unknown uncertainty model {self.kind!r}")
        object.__setattr__(self, "explicit",
                           {tuple(k): d if isinstance(d, Degree) else Degree(d)
                            for k, d in _flatten(self.explicit).items()})
        object.__setattr__(self, "pickup_coeff", _number(self.pickup_coeff))
        object.__setattr__(self, "delivery_coeff", _number(self.delivery_coeff))


def _flatten(table) -> dict:
    out = {}
    for key, value in table.items():
        if isinstance(value, Mapping):
            for inner, d in value.items():
                out[(key, inner)] = d
        else:
            out[tuple(key)] = value
    return out


@dataclass(frozen=True)
class DependenceRelation:
    """``depender`` relies on ``dependee`` performing ``action`` in ``plan``."""

    depender: str
    dependee: str
    goal: str
    plan: str
    action: str
    possibility: Degree = ONE

    @property
    def kind(self) -> str:
        return "basic_dep" if self.possibility == ONE else "poss_dep"

    def __str__(self):
        args = f"{self.depender}, {self.dependee}, {self.goal}, {self.plan}, {self.action}"
        if self.kind == "poss_dep":
            args += f", {self.possibility}"
        return f"{self.kind}({args})"


@dataclass
class CoalitionProblem:
    agents: list
    goals: list
    plans: list
    exclusions: list = field(default_factory=list)
    distances: DistanceTable | None = None
    uncertainty: UncertaintyModel | None = None
    goal_weights: dict | None = None

    def __post_init__(self):
        self.agents = list(self.agents)
        self.goals = [check_atom(g) for g in self.goals]
        self.plans = list(self.plans)
        self.exclusions = list(self.exclusions)
        if self.goal_weights is not None:
            self.goal_weights = {g: w if isinstance(w, Degree) else Degree(w)
                                 for g, w in self.goal_weights.items()}
        self.validate()

    def validate(self):
        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise SchemaError("duplicate agent id", "agents")
        if len(set(self.goals)) != len(self.goals):
            raise SchemaError("duplicate goal", "goals")
        agents = {a.id: a for a in self.agents}
        plan_ids = [p.id for p in self.plans]
        if len(set(plan_ids)) != len(plan_ids):
            raise SchemaError("duplicate plan id", "plans")
        for i, plan in enumerate(self.plans):
            if plan.goal not in self.goals:
                raise SchemaError(f"plan {plan.id} targets undeclared goal {plan.goal}",
                                  f"plans/{i}/goal")
            for j, (agent, action) in enumerate(plan.steps):
                if agent not in agents:
                    raise UnknownAgent(f"plan {plan.id} uses undeclared agent {agent}",
                                       f"plans/{i}/steps/{j}")
                if action not in agents[agent].capabilities:
                    raise UnknownAction(f"agent {agent} cannot perform {action} (plan {plan.id})",
                                        f"plans/{i}/steps/{j}")
        materials = set()
        for i, group in enumerate(self.exclusions):
            if group.material in materials:
                raise SchemaError(f"material {group.material} has two exclusion groups",
                                  f"exclusions/{i}")
            materials.add(group.material)
            for agent, action in group.carry_actions:
                if agent not in agents:
                    raise UnknownAgent(f"exclusion {group.material} uses undeclared agent {agent}",
                                       f"exclusions/{i}/carry_actions/{agent}")
                if action not in agents[agent].capabilities:
                    raise UnknownAction(f"agent {agent} cannot perform {action}",
                                        f"exclusions/{i}/carry_actions/{agent}")
        if self.goal_weights is not None:
            unknown = sorted(set(self.goal_weights) - set(self.goals))
            if unknown:
                raise SchemaError(f"weight for undeclared goal {unknown[0]}", "weights")
            total = sum(float(w) for w in self.goal_weights.values())
            if abs(total - 1) > WEIGHT_TOLERANCE:
                raise SchemaError(f"goal weights sum to {total}, expected 1", "weights")

    @property
    def agent_ids(self) -> list:
        return [a.id for a in self.agents]

    def plan(self, plan_id: str) -> Plan:
        for p in self.plans:
            if p.id == plan_id:
                return p
        raise KeyError(plan_id)

    def exclusion_of(self, agent: str, action: str) -> ExclusionGroup | None:
        for group in self.exclusions:
            if (agent, action) in group.carry_actions:
                return group
        return None

    def material_of(self, agent: str, action: str) -> str | None:
        group = self.exclusion_of(agent, action)
        return None if group is None else group.material

    @property
    def auxiliary_atoms(self) -> frozenset:
        return frozenset(g.atom for g in self.exclusions)


def action_possibility(agent: str, carry_action: str, distances: DistanceTable | None,
                       model: UncertaintyModel, material: str | None = None) -> Degree:
    """Certainty that ``agent`` completes ``carry_action``, clamped to [0, 1]."""
    if model.kind == "explicit":
        try:
            return model.explicit[(agent, carry_action)]
        except KeyError:
            raise MissingPossibility(
                f"no possibility given for {agent} performing {carry_action}") from None
    if material is None:
        raise MissingDistance(f"{carry_action} of {agent} moves no known material")
    if distances is None:
        raise MissingDistance("the linear_distance model needs a distance table")
    loss = (model.pickup_coeff * distances.pickup(agent, material)
            + model.delivery_coeff * distances.delivery(material))
    return Degree(min(Decimal(1), max(Decimal(0), 1 - loss)))


def plan_possibility(plan: Plan, possibilities: Mapping) -> Degree:
    """Product of the step possibilities; missing non-achiever steps count as 1."""
    if plan.possibility is not None:
        return plan.possibility
    if plan.achiever not in possibilities:
        raise MissingPossibility(f"no possibility for the achiever step of plan {plan.id}")
    result = ONE
    for step in plan.steps:
        result = result * possibilities.get(step, ONE)
    return result


def step_possibilities(problem: CoalitionProblem, plan: Plan) -> dict:
    """Possibility of each uncertain step of ``plan`` under the problem's model.

    Only carry steps (the achiever) are uncertain; information steps are left
    out and so count as 1.
    """
    if problem.uncertainty is None:
        return {plan.achiever: ONE}
    agent, action = plan.achiever
    degree = action_possibility(agent, action, problem.distances, problem.uncertainty,
                                problem.material_of(agent, action))
    return {plan.achiever: degree}


def plan_degrees(problem: CoalitionProblem) -> dict:
    """Plan id to the necessity carried by its compiled goal rule."""
    if problem.uncertainty is None:
        raise MissingPossibility("the problem has no uncertainty model")
    out = {}
    for plan in problem.plans:
        if plan.possibility is not None:
            out[plan.id] = plan.possibility
        else:
            out[plan.id] = plan_possibility(plan, step_possibilities(problem, plan))
    return out


def derive_dependencies(problem: CoalitionProblem, with_possibility: bool = False) -> list:
    """One relation per plan step, the achiever depending on the step's agent."""
    out = []
    for plan in problem.plans:
        uncertain = step_possibilities(problem, plan) if with_possibility else {}
        for step in plan.steps:
            agent, action = step
            out.append(DependenceRelation(plan.achiever_agent, agent, plan.goal, plan.id,
                                          action, uncertain.get(step, ONE)))
    return out


def _goal_rule(problem: CoalitionProblem, plan: Plan, degree) -> BridgeRule:
    achiever, action = plan.achiever
    group = problem.exclusion_of(achiever, action)
    neg = {(achiever, group.atom)} if group is not None else set()
    return BridgeRule(achiever, plan.goal, set(plan.steps), neg, degree)


def _compile(problem: CoalitionProblem, degrees: dict | None) -> Mcs:
    certain = ONE if degrees is not None else None
    contexts = []
    for agent in problem.agents:
        rules = tuple(Rule(a, necessity=certain) for a in agent.actions)
        constraints = []
        for group in problem.exclusions:
            for member, action in group.carry_actions:
                if member == agent.id:
                    constraints.append(Constraint({action, group.atom}))
        program = Program(rules, agent.choices, tuple(constraints),
                          semantics=Semantics.MINIMAL_MODEL)
        contexts.append(Context(agent.id, program))
    bridges = [_goal_rule(problem, p, None if degrees is None else degrees[p.id])
               for p in problem.plans]
    for group in problem.exclusions:
        for member, _ in group.carry_actions:
            for other, action in group.carry_actions:
                if other != member:
                    bridges.append(BridgeRule(member, group.atom, {(other, action)},
                                              necessity=certain))
    return Mcs(with_bridge_atoms(contexts, bridges), tuple(bridges))


def compile_classical(problem: CoalitionProblem) -> Mcs:
    """The MCS whose equilibria are the feasible coalitions."""
    return _compile(problem, None)


def compile_possibilistic(problem: CoalitionProblem) -> Mcs:
    """As :func:`compile_classical`, each goal rule weighted by its plan's possibility."""
    return _compile(problem, plan_degrees(problem))


@dataclass(frozen=True)
class Assignment:
    goal: str
    agent: str
    plan: str
    action: str
    material: str | None
    necessity: Degree = ONE


@dataclass(frozen=True)
class Coalition:
    """An equilibrium read as a goal-to-agent assignment."""

    id: str
    assignments: tuple
    source_state: tuple

    @property
    def goals(self) -> tuple:
        return tuple(a.goal for a in self.assignments)

    def assignment(self, goal: str) -> Assignment:
        for a in self.assignments:
            if a.goal == goal:
                return a
        raise KeyError(goal)

    @property
    def per_goal_necessity(self) -> dict:
        return {a.goal: a.necessity for a in self.assignments}

    @property
    def pairs(self) -> frozenset:
        """``{(agent, goal)}``."""
        return frozenset((a.agent, a.goal) for a in self.assignments)

    @property
    def plans(self) -> tuple:
        return tuple(a.plan for a in self.assignments)


def _fired(problem: CoalitionProblem, plan: Plan, state, index) -> bool:
    achiever, action = plan.achiever
    beliefs = state[index[achiever]]
    if plan.goal not in beliefs:
        return False
    if any(a not in state[index[agent]] for agent, a in plan.steps):
        return False
    group = problem.exclusion_of(achiever, action)
    return group is None or group.atom not in beliefs


def extract_coalitions(problem: CoalitionProblem, equilibria: Iterable, prefix: str = "C") -> list:
    """Read each equilibrium of the compiled system as a coalition.

    Works on classical belief states and on possibilistic ones, whose goal
    necessities are carried into the assignments.
    """
    index = {a: i for i, a in enumerate(problem.agent_ids)}
    out = []
    for n, state in enumerate(equilibria):
        if len(state) != len(index):
            raise ValueError(f"state has {len(state)} belief sets for {len(index)} agents")
        by_goal = {}
        for plan in sorted(problem.plans, key=lambda p: p.id):
            if _fired(problem, plan, state, index):
                by_goal.setdefault(plan.goal, []).append(plan)
        assignments = []
        for goal in problem.goals:
            fired = by_goal.get(goal)
            if not fired:
                continue
            if len(fired) > 1:
                warnings.warn(AmbiguousPlan(
                    f"goal {goal} fired by plans {[p.id for p in fired]}; using {fired[0].id}"),
                    stacklevel=2)
            plan = fired[0]
            agent, action = plan.achiever
            beliefs = state[index[agent]]
            necessity = beliefs[goal] if isinstance(beliefs, Mapping) else ONE
            assignments.append(Assignment(goal, agent, plan.id, action,
                                          problem.material_of(agent, action), necessity))
        out.append(Coalition(f"{prefix}{n}", tuple(assignments), state))
    return out


def unachievable_goals(problem: CoalitionProblem, coalitions: Iterable[Coalition]) -> list:
    """Goals assigned in none of the coalitions, in declaration order."""
    seen = set()
    for c in coalitions:
        seen.update(c.goals)
    return [g for g in problem.goals if g not in seen]


def hide_auxiliary(problem: CoalitionProblem, state) -> BeliefState:
    """The belief state without the compiler's ``carriesElse_*`` atoms."""
    aux = problem.auxiliary_atoms
    return BeliefState(frozenset(a for a in s if a not in aux) for s in state)


def necessity_or_zero(coalition: Coalition, goal: str) -> Degree:
    try:
        return coalition.assignment(goal).necessity
    except KeyError:
        return ZERO
