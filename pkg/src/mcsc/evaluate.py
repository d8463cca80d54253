"""Scoring and ranking coalitions.

Travel cost and economic dominance come from a distance table. Conviviality
counts reciprocity cycles in the dependence graph of a coalition. The
multi-criteria methods (weighted sum, weighted product, TOPSIS) aggregate
per-goal certainty scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .coalition import Coalition, CoalitionProblem, DistanceTable
from .degree import Degree
from .errors import GraphTooLarge, MissingDistance, NonPositiveScore, WeightMismatch, ZeroColumn

DEFAULT_MAX_CYCLES = 10**6
CONVIVIALITY_PLACES = Decimal("0.00001")
WEIGHT_TOLERANCE = Decimal("0.000001")


def _trip(a, distances: DistanceTable) -> Decimal:
    if a.material is None:
        raise MissingDistance(f"goal {a.goal} is achieved by {a.action}, which moves no known material")
    return distances.trip(a.agent, a.material)


def coalition_cost(coalition: Coalition, distances: DistanceTable) -> Decimal:
    """Total distance: each carrier to its material, then the material to its destination."""
    return sum((_trip(a, distances) for a in coalition.assignments), Decimal(0))


def agent_distances(coalition: Coalition, distances: DistanceTable,
                    agents: Iterable[str] = ()) -> dict:
    """Distance covered by each agent; agents with no assignment cover 0."""
    out = {a: Decimal(0) for a in agents}
    for a in coalition.assignments:
        out[a.agent] = out.get(a.agent, Decimal(0)) + _trip(a, distances)
    return out


def economically_dominates(c1: Coalition, c2: Coalition, distances: DistanceTable) -> bool:
    """Nobody travels further in ``c1`` than in ``c2`` and somebody travels less."""
    d1 = agent_distances(c1, distances)
    d2 = agent_distances(c2, distances)
    agents = set(d1) | set(d2)
    zero = Decimal(0)
    pairs = [(d1.get(a, zero), d2.get(a, zero)) for a in agents]
    return all(x <= y for x, y in pairs) and any(x < y for x, y in pairs)


@dataclass(frozen=True)
class DependenceGraph:
    """Agents and goal-labelled dependence edges ``depender -> dependee``."""

    nodes: tuple
    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted(set((a, b, g) for a, b, g in self.edges)))
        nodes = list(dict.fromkeys(self.nodes))
        for a, b, _ in edges:
            for n in (a, b):
                if n not in nodes:
                    nodes.append(n)
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_coalition(cls, problem: CoalitionProblem, coalition: Coalition) -> DependenceGraph:
        """Edges from every plan the coalition uses; an agent never depends on itself."""
        edges = []
        for a in coalition.assignments:
            plan = problem.plan(a.plan)
            for agent, _ in plan.steps:
                if agent != plan.achiever_agent:
                    edges.append((plan.achiever_agent, agent, plan.goal))
        return cls(tuple(problem.agent_ids), tuple(edges))

    @classmethod
    def from_relations(cls, relations, nodes: Iterable[str] = ()) -> DependenceGraph:
        edges = [(r.depender, r.dependee, r.goal) for r in relations if r.depender != r.dependee]
        return cls(tuple(nodes), tuple(edges))

    def label_counts(self) -> dict:
        """``(a, b)`` to the number of distinct goal labels on edges a -> b."""
        out = {}
        for a, b, _ in self.edges:
            out[(a, b)] = out.get((a, b), 0) + 1
        return out

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for (a, b), k in self.label_counts().items():
            g.add_edge(a, b, labels=k)
        return g

    def to_dot(self, name: str = "dependencies") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{n}";' for n in self.nodes]
        lines += [f'  "{a}" -> "{b}" [label="{g}"];' for a, b, g in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _canonical(cycle: list) -> tuple:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def simple_cycles(graph: DependenceGraph, max_cycles: int = DEFAULT_MAX_CYCLES) -> list:
    """Elementary cycles of length >= 2 as ``(node tuple, multiplicity)``, sorted.

    The multiplicity is the number of ways to pick one goal label per edge,
    so label-distinct parallel edges give distinct cycles.
    """
    labels = graph.label_counts()
    out = []
    for cycle in nx.simple_cycles(graph.to_networkx()):
        if len(cycle) < 2:
            continue
        if len(out) >= max_cycles:
            raise GraphTooLarge(f"more than {max_cycles} simple cycles")
        cyc = _canonical(cycle)
        mult = math.prod(labels[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc)))
        out.append((cyc, mult))
    return sorted(out)


def pair_counts(graph: DependenceGraph, max_cycles: int = DEFAULT_MAX_CYCLES) -> dict:
    """coal(a, b): cycles in which ``b`` directly follows ``a``."""
    out = {}
    for cyc, mult in simple_cycles(graph, max_cycles):
        for i, a in enumerate(cyc):
            b = cyc[(i + 1) % len(cyc)]
            out[(a, b)] = out.get((a, b), 0) + mult
    return out


def cycle_pair_count(graph: DependenceGraph, max_cycles: int = DEFAULT_MAX_CYCLES) -> int:
    """Sum of coal(a, b) over all ordered pairs of distinct agents."""
    return sum(pair_counts(graph, max_cycles).values())


def theta(n_agents: int, n_goals: int) -> int:
    """Largest possible number of labelled cycles through one ordered pair of agents."""
    return sum(math.perm(n_agents - 2, l - 2) * n_goals ** l for l in range(2, n_agents + 1))


def omega(n_agents: int, n_goals: int) -> int:
    """Largest possible value of :func:`cycle_pair_count`."""
    return n_agents * (n_agents - 1) * theta(n_agents, n_goals)


def conviviality_fraction(graph: DependenceGraph, n_agents: int, n_goals: int,
                          max_cycles: int = DEFAULT_MAX_CYCLES) -> Fraction:
    if n_agents < 2:
        raise ValueError("conviviality needs at least two agents")
    return Fraction(cycle_pair_count(graph, max_cycles), omega(n_agents, n_goals))


def conviviality(graph: DependenceGraph, n_agents: int, n_goals: int,
                 max_cycles: int = DEFAULT_MAX_CYCLES) -> Decimal:
    """Cycle-pair count over its maximum, rounded half-even to five decimals."""
    exact = conviviality_fraction(graph, n_agents, n_goals, max_cycles)
    value = Decimal(exact.numerator) / Decimal(exact.denominator)
    return value.quantize(CONVIVIALITY_PLACES, rounding=ROUND_HALF_EVEN)


def _decimal(x) -> Decimal:
    if isinstance(x, Degree):
        return x.as_decimal().normalize()
    if isinstance(x, float):
        return Decimal(repr(x))
    return Decimal(x)


@dataclass(frozen=True)
class ScoreMatrix:
    """Scores of alternatives (rows) against weighted criteria (columns)."""

    alternatives: tuple
    criteria: tuple
    scores: tuple
    weights: tuple
    cost_criteria: frozenset = frozenset()

    def __post_init__(self):
        alternatives = tuple(self.alternatives)
        criteria = tuple(self.criteria)
        scores = tuple(tuple(_decimal(q) for q in row) for row in self.scores)
        weights = tuple(_decimal(w) for w in self.weights)
        if len(set(alternatives)) != len(alternatives):
            raise ValueError("duplicate alternative")
        if len(scores) != len(alternatives):
            raise ValueError(f"{len(scores)} rows for {len(alternatives)} alternatives")
        for alt, row in zip(alternatives, scores):
            if len(row) != len(criteria):
                raise ValueError(f"row {alt} has {len(row)} scores for {len(criteria)} criteria")
            if any(q < 0 for q in row):
                raise ValueError(f"row {alt} has a negative score")
        if len(weights) != len(criteria):
            raise WeightMismatch(f"{len(weights)} weights for {len(criteria)} criteria")
        if any(w < 0 for w in weights):
            raise WeightMismatch("weights must be nonnegative")
        if criteria and abs(sum(weights) - 1) > WEIGHT_TOLERANCE:
            raise WeightMismatch(f"weights sum to {sum(weights)}, expected 1")
        unknown = set(self.cost_criteria) - set(criteria)
        if unknown:
            raise ValueError(f"unknown cost criterion {sorted(unknown)[0]}")
        object.__setattr__(self, "alternatives", alternatives)
        object.__setattr__(self, "criteria", criteria)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "cost_criteria", frozenset(self.cost_criteria))

    @classmethod
    def from_coalitions(cls, coalitions: Sequence[Coalition], goals: Sequence[str],
                        weights: Mapping | Sequence | None = None) -> ScoreMatrix:
        """Per-goal necessities; a goal a coalition leaves unassigned scores 0."""
        goals = tuple(goals)
        if weights is None:
            weights = [Decimal(1) / len(goals)] * len(goals) if goals else []
        elif isinstance(weights, Mapping):
            missing = [g for g in goals if g not in weights]
            if missing:
                raise WeightMismatch(f"no weight for goal {missing[0]}")
            weights = [weights[g] for g in goals]
        rows = []
        for c in coalitions:
            nec = c.per_goal_necessity
            rows.append([nec.get(g, Decimal(0)) for g in goals])
        return cls(tuple(c.id for c in coalitions), goals, tuple(rows), tuple(weights))

    def row(self, alternative: str) -> tuple:
        return self.scores[self.alternatives.index(alternative)]

    def column(self, criterion: str) -> tuple:
        j = self.criteria.index(criterion)
        return tuple(row[j] for row in self.scores)

    def as_array(self) -> np.ndarray:
        return np.array([[float(q) for q in row] for row in self.scores], dtype=float).reshape(
            len(self.alternatives), len(self.criteria))


@dataclass(frozen=True)
class Ranking:
    """Alternatives with aggregate scores, best first; ties go to the smaller id."""

    method: str
    entries: tuple
    ascending: bool = False

    @classmethod
    def from_scores(cls, method: str, scores: Mapping, ascending: bool = False) -> Ranking:
        if ascending:
            order = sorted(scores.items(), key=lambda kv: (kv[1], kv[0]))
        else:
            order = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls(method, tuple(order), ascending)

    @property
    def order(self) -> tuple:
        return tuple(a for a, _ in self.entries)

    @property
    def best(self) -> str | None:
        return self.entries[0][0] if self.entries else None

    def score(self, alternative: str):
        return dict(self.entries)[alternative]


def weighted_sum(matrix: ScoreMatrix) -> Ranking:
    """Sum of weighted scores, exact decimal."""
    scores = {alt: sum((w * q for w, q in zip(matrix.weights, row)), Decimal(0))
              for alt, row in zip(matrix.alternatives, matrix.scores)}
    return Ranking.from_scores("ws", scores)


def _positive(row, label=""):
    for q in row:
        if _decimal(q) <= 0:
            raise NonPositiveScore(f"weighted product needs positive scores{label}, got {q}")


def weighted_product_ratio(row1: Sequence, row2: Sequence, weights: Sequence) -> float:
    """Product over criteria of ``(q1/q2) ** w``; above 1 means row1 is preferred."""
    if not len(row1) == len(row2) == len(weights):
        raise WeightMismatch("rows and weights differ in length")
    _positive(row1)
    _positive(row2)
    logs = [float(_decimal(w)) * (math.log(float(_decimal(a))) - math.log(float(_decimal(b))))
            for a, b, w in zip(row1, row2, weights)]
    return math.exp(math.fsum(logs))


def wp_rank(matrix: ScoreMatrix) -> Ranking:
    """Weighted-product ranking.

    The pairwise ratio of two rows is the quotient of their weighted products,
    so sorting by ``prod q ** w`` orders the alternatives exactly as the
    pairwise tournament does. Scores are rounded to 12 significant digits so
    that mathematically equal products tie deterministically.
    """
    scores = {}
    for alt, row in zip(matrix.alternatives, matrix.scores):
        _positive(row, f" (alternative {alt})")
        log = math.fsum(float(w) * math.log(float(q)) for w, q in zip(matrix.weights, row))
        scores[alt] = float(f"{math.exp(log):.12g}")
    return Ranking.from_scores("wp", scores)


def topsis(matrix: ScoreMatrix) -> Ranking:
    """Rank by relative closeness to the ideal solution.

    Columns are vector-normalised and weighted; the ideal takes the best value
    per criterion (the maximum, or the minimum for cost criteria). Closeness
    is 0.5 when an alternative is as far from the ideal as from the anti-ideal
    and both distances vanish.
    """
    x = matrix.as_array()
    if x.size == 0:
        return Ranking.from_scores("topsis", {a: 0.5 for a in matrix.alternatives})
    norms = np.sqrt((x ** 2).sum(axis=0))
    zero = [c for c, n in zip(matrix.criteria, norms) if n == 0]
    if zero:
        raise ZeroColumn(f"criterion {zero[0]} is zero for every alternative")
    v = x / norms * np.array([float(w) for w in matrix.weights])
    cost = np.array([c in matrix.cost_criteria for c in matrix.criteria])
    ideal = np.where(cost, v.min(axis=0), v.max(axis=0))
    anti = np.where(cost, v.max(axis=0), v.min(axis=0))
    d_plus = np.sqrt(((v - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((v - anti) ** 2).sum(axis=1))
    total = d_plus + d_minus
    closeness = np.divide(d_minus, total, out=np.full_like(total, 0.5), where=total > 0)
    scores = {a: float(f"{c:.12g}") for a, c in zip(matrix.alternatives, closeness)}
    return Ranking.from_scores("topsis", scores)


def cost_ranking(coalitions: Sequence[Coalition], distances: DistanceTable) -> Ranking:
    """Cheapest coalition first."""
    return Ranking.from_scores("cost", {c.id: coalition_cost(c, distances) for c in coalitions},
                               ascending=True)


def conviviality_ranking(problem: CoalitionProblem, coalitions: Sequence[Coalition],
                         max_cycles: int = DEFAULT_MAX_CYCLES) -> Ranking:
    """Most convivial coalition first, compared on the exact ratio."""
    n, g = len(problem.agents), len(problem.goals)
    exact = {c.id: conviviality_fraction(DependenceGraph.from_coalition(problem, c), n, g,
                                         max_cycles) for c in coalitions}
    ranked = Ranking.from_scores("conviviality", exact)
    rounded = tuple((a, (Decimal(f.numerator) / Decimal(f.denominator)).quantize(
        CONVIVIALITY_PLACES, rounding=ROUND_HALF_EVEN)) for a, f in ranked.entries)
    return Ranking("conviviality", rounded)
