"""Text formats: the MCS rule language and JSON coalition-problem documents.

MCS language::

    % comments start with % or #
    context c1 {
        atoms a, b, c.              % optional explicit alphabet
        a.                          % fact
        b :- a, not c [0.8].        % rule with a necessity degree
        choice b | c.               % at least one of b, c (minimal-model contexts)
        :- b, c.                    % denial
    }
    (c1:c) :- (c2:x), not (c3:y) [0.9].

A context may name its semantics after its name (``asp`` or ``minimal``);
by default contexts with choice clauses use choice-minimal-model semantics
and all others answer-set semantics.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources

import jsonschema

from .coalition import (AgentSpec, CoalitionProblem, DistanceTable, ExclusionGroup, Plan,
                        UncertaintyModel)
from .degree import Degree
from .errors import (DegreeOutOfRange, ParseError, SchemaError, SemanticError, UnknownContext)
from .logic import RESERVED, ChoiceClause, Constraint, Program, Rule, Semantics
from .mcs import BridgeRule, Context, Mcs, with_bridge_atoms

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>[%\#][^\n]*)
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>:-|[(){}\[\]:,.|])
""", re.VERBOSE)

_SEMANTICS = {"asp": Semantics.ANSWER_SET, "minimal": Semantics.MINIMAL_MODEL}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class McsDocument:
    """A parsed MCS with the source text and where each item was declared."""

    source: str
    mcs: Mcs
    locations: dict = field(default_factory=dict)


@dataclass
class _ContextDraft:
    name: str
    location: tuple
    semantics: Semantics | None = None
    alphabet: set | None = None
    rules: list = field(default_factory=list)
    choices: list = field(default_factory=list)
    constraints: list = field(default_factory=list)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def _describe(self, tok):
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def next(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text) -> bool:
        return self.tok.kind in ("punct", "name") and self.tok.text == text

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self._error(f"expected {text!r}, found {self._describe(self.tok)}")
        return self.next()

    def name(self, what="name", reserved_ok=False) -> Token:
        tok = self.tok
        if tok.kind != "name":
            raise self._error(f"expected {what}, found {self._describe(tok)}")
        if not reserved_ok and tok.text in RESERVED:
            raise self._error(f"{tok.text!r} is a reserved word and cannot be used as {what}")
        return self.next()

    def degree(self):
        if not self.at("["):
            return None
        self.next()
        tok = self.tok
        if tok.kind != "number":
            raise self._error(f"expected a degree, found {self._describe(tok)}")
        self.next()
        try:
            value = Degree(Decimal(tok.text))
        except DegreeOutOfRange:
            raise DegreeOutOfRange(f"degree {tok.text} outside [0, 1]", tok.line, tok.column) from None
        self.expect("]")
        return value

    # system := (context | bridge)*
    def system(self):
        contexts, bridges = [], []
        while self.tok.kind != "eof":
            if self.at("context"):
                contexts.append(self.context())
            elif self.at("("):
                bridges.append(self.bridge())
            else:
                raise self._error(f"expected 'context' or a bridge rule, found {self._describe(self.tok)}")
        return contexts, bridges

    def context(self) -> _ContextDraft:
        self.expect("context")
        tok = self.name("a context name")
        draft = _ContextDraft(tok.text, (tok.line, tok.column))
        if self.tok.kind == "name" and self.tok.text in _SEMANTICS:
            draft.semantics = _SEMANTICS[self.next().text]
        self.expect("{")
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self._error(f"unterminated context {draft.name}")
            self.statement(draft)
        self.expect("}")
        return draft

    def statement(self, draft: _ContextDraft):
        if self.at("atoms"):
            start = self.next()
            if draft.alphabet is not None:
                raise SemanticError(f"context {draft.name} declares its atoms twice",
                                    start.line, start.column)
            names = [self.name("an atom").text]
            while self.at(","):
                self.next()
                names.append(self.name("an atom").text)
            self.expect(".")
            draft.alphabet = set(names)
        elif self.at("choice"):
            self.next()
            alts = [self.name("an atom").text]
            while self.at("|"):
                self.next()
                alts.append(self.name("an atom").text)
            tok = self.expect(".")
            try:
                draft.choices.append(ChoiceClause(tuple(alts)))
            except ValueError as exc:
                raise SemanticError(str(exc), tok.line, tok.column) from None
        elif self.at(":-"):
            self.next()
            pos, neg = self.literals()
            self.expect(".")
            draft.constraints.append(Constraint(pos, neg))
        else:
            head = self.name("a rule head").text
            pos, neg = set(), set()
            if self.at(":-"):
                self.next()
                pos, neg = self.literals()
            necessity = self.degree()
            self.expect(".")
            draft.rules.append(Rule(head, frozenset(pos), frozenset(neg), necessity))

    def literals(self):
        pos, neg = set(), set()
        while True:
            if self.at("not"):
                self.next()
                neg.add(self.name("an atom").text)
            else:
                pos.add(self.name("an atom").text)
            if not self.at(","):
                return pos, neg
            self.next()

    def qualified(self):
        self.expect("(")
        ctx = self.name("a context name")
        self.expect(":")
        atom = self.name("an atom")
        self.expect(")")
        return ctx, atom

    def bridge(self):
        start = self.tok
        ctx, atom = self.qualified()
        pos, neg, refs = set(), set(), [ctx]
        if self.at(":-"):
            self.next()
            while True:
                negated = self.at("not")
                if negated:
                    self.next()
                c, a = self.qualified()
                refs.append(c)
                (neg if negated else pos).add((c.text, a.text))
                if not self.at(","):
                    break
                self.next()
        necessity = self.degree()
        self.expect(".")
        rule = BridgeRule(ctx.text, atom.text, frozenset(pos), frozenset(neg), necessity)
        return rule, (start.line, start.column), refs


def _inferred_semantics(draft_choices) -> Semantics:
    return Semantics.MINIMAL_MODEL if draft_choices else Semantics.ANSWER_SET


def parse_mcs(text: str) -> McsDocument:
    """Parse the MCS language; errors carry a line and column."""
    drafts, bridges = _Parser(text).system()
    locations = {}
    by_name = {}
    for d in drafts:
        if d.name in by_name:
            raise SemanticError(f"context {d.name} is declared twice", *d.location)
        by_name[d.name] = d
        locations[("context", d.name)] = d.location
    for i, (rule, loc, refs) in enumerate(bridges):
        locations[("bridge", i)] = loc
        for tok in refs:
            if tok.text not in by_name:
                raise UnknownContext(f"unknown context {tok.text}", tok.line, tok.column)
        for c, a in [(rule.target, rule.head)] + sorted(rule.pos | rule.neg):
            declared = by_name[c].alphabet
            if declared is not None and a not in declared:
                role = "head" if (c, a) == (rule.target, rule.head) else "body atom"
                raise SemanticError(f"bridge {role} {a} is outside the atoms of context {c}", *loc)
    contexts = []
    for d in drafts:
        semantics = d.semantics or _inferred_semantics(d.choices)
        try:
            program = Program(tuple(d.rules), tuple(d.choices), tuple(d.constraints),
                              None if d.alphabet is None else frozenset(d.alphabet), semantics)
        except ValueError as exc:
            raise SemanticError(f"context {d.name}: {exc}", *d.location) from None
        contexts.append(Context(d.name, program))
    rules = tuple(rule for rule, _, _ in bridges)
    mcs = Mcs(with_bridge_atoms(contexts, rules), rules)
    return McsDocument(text, mcs, locations)


def _used_atoms(program: Program) -> set:
    used = set()
    for r in program.rules:
        used |= r.atoms
    for c in program.choices:
        used.update(c.alternatives)
    for c in program.constraints:
        used |= c.pos | c.neg
    return used


def print_mcs(mcs: Mcs) -> str:
    """Text that :func:`parse_mcs` reads back as an equal system."""
    bridge_atoms = {c.name: set() for c in mcs.contexts}
    for br in mcs.bridge_rules:
        bridge_atoms[br.target].add(br.head)
        for c, a in br.pos | br.neg:
            bridge_atoms[c].add(a)
    lines = []
    for ctx in mcs.contexts:
        p = ctx.program
        header = f"context {ctx.name}"
        if p.semantics is not _inferred_semantics(p.choices):
            header += " asp" if p.semantics is Semantics.ANSWER_SET else " minimal"
        lines.append(header + " {")
        if p.alphabet != _used_atoms(p) | bridge_atoms[ctx.name]:
            lines.append("    atoms " + ", ".join(sorted(p.alphabet)) + ".")
        lines += ["    " + str(item) for item in p.rules + p.choices + p.constraints]
        lines.append("}")
    lines += [str(br) for br in mcs.bridge_rules]
    return "\n".join(lines) + "\n" if lines else ""


@dataclass
class ProblemDocument:
    """A validated coalition problem plus the document's free-form metadata."""

    problem: CoalitionProblem
    title: str = ""
    notes: str = ""
    raw: dict = field(default_factory=dict)


def _schema(name: str) -> dict:
    return json.loads(resources.files("mcsc.data").joinpath(name).read_text(encoding="utf-8"))


def _path(error) -> str:
    return "/".join(str(p) for p in error.absolute_path)


def parse_problem(text: str) -> ProblemDocument:
    """Load a JSON problem document; schema violations name the offending key path."""
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    validator = jsonschema.Draft202012Validator(_schema("problem.schema.json"))
    errors = sorted(validator.iter_errors(raw), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise SchemaError(best.message, _path(best))
    return ProblemDocument(_build_problem(raw), raw.get("title", ""), raw.get("notes", ""), raw)


def _wrap(path, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), path) from None


def _build_problem(raw: dict) -> CoalitionProblem:
    agents = [_wrap(f"agents/{i}", AgentSpec, a["id"], tuple(a.get("actions", ())),
                    tuple(tuple(c) for c in a.get("choices", ())))
              for i, a in enumerate(raw["agents"])]
    plans = []
    for i, p in enumerate(raw["plans"]):
        achiever = tuple(p["achiever"]) if "achiever" in p else None
        plans.append(_wrap(f"plans/{i}", Plan, p["id"], p["goal"],
                           tuple(tuple(s) for s in p["steps"]), achiever, p.get("possibility")))
    exclusions = [_wrap(f"exclusions/{i}", ExclusionGroup, e["material"], e["carry_actions"])
                  for i, e in enumerate(raw.get("exclusions", ()))]
    distances = None
    if "distances" in raw:
        d = raw["distances"]
        distances = _wrap("distances", DistanceTable, d.get("agent_to_material", {}),
                          d.get("material_to_destination", {}))
    uncertainty = None
    if "uncertainty" in raw:
        u = raw["uncertainty"]
        kwargs = {k: u[k] for k in ("pickup_coeff", "delivery_coeff") if k in u}
        uncertainty = _wrap("uncertainty", UncertaintyModel, u["model"],
                            u.get("possibilities", {}), **kwargs)
    return CoalitionProblem(agents, list(raw["goals"]), plans, exclusions, distances,
                            uncertainty, raw.get("weights"))


def load_bundled(name: str) -> str:
    """Text of a file shipped in ``mcsc/data`` (e.g. ``robots.json``)."""
    return resources.files("mcsc.data").joinpath(name).read_text(encoding="utf-8")
