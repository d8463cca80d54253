"""Deterministic result reports (JSON and plain text)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal

from .mcs import Mcs


def format_number(value) -> str:
    """Numbers without trailing zeros; degrees keep at least one decimal."""
    if isinstance(value, Decimal):
        return format(value.normalize(), "f")
    return str(value)


def state_record(mcs: Mcs, state, ident: str) -> dict:
    """One equilibrium as ``{"id", "contexts": [{"context", "atoms", "necessities"?}]}``."""
    contexts = []
    for name, beliefs in zip(mcs.names, state):
        entry = {"context": name, "atoms": sorted(beliefs)}
        if hasattr(beliefs, "items"):
            entry["necessities"] = {a: format_number(d) for a, d in sorted(beliefs.items())}
        contexts.append(entry)
    return {"id": ident, "contexts": contexts}


def coalition_record(coalition) -> dict:
    return {
        "id": coalition.id,
        "assignments": [
            {"goal": a.goal, "agent": a.agent, "plan": a.plan, "action": a.action,
             "material": a.material, "necessity": format_number(a.necessity)}
            for a in coalition.assignments
        ],
    }


def ranking_record(ranking) -> dict:
    return {
        "method": ranking.method,
        "order": "ascending" if ranking.ascending else "descending",
        "entries": [{"alternative": a, "score": format_number(s)} for a, s in ranking.entries],
    }


@dataclass
class ResultReport:
    command: str
    mode: str
    consistent: bool
    equilibria: list = field(default_factory=list)
    coalitions: list = field(default_factory=list)
    unachievable_goals: list = field(default_factory=list)
    metrics: dict | None = None
    ranking: dict | None = None
    diagnostics: list = field(default_factory=list)
    mcs: str | None = None
    dot: dict | None = None

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "mode": self.mode,
            "consistent": self.consistent,
            "equilibria": self.equilibria,
            "coalitions": self.coalitions,
            "unachievable_goals": self.unachievable_goals,
            "metrics": self.metrics,
            "ranking": self.ranking,
            "diagnostics": self.diagnostics,
        }
        if self.mcs is not None:
            out["mcs"] = self.mcs
        if self.dot is not None:
            out["dot"] = self.dot
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = []
        if not self.consistent:
            lines.append("INCONSISTENT")
        for eq in self.equilibria:
            parts = []
            for c in eq["contexts"]:
                if "necessities" in c:
                    atoms = ", ".join(f"({a}, {d})" for a, d in c["necessities"].items())
                else:
                    atoms = ", ".join(c["atoms"])
                parts.append(f"{c['context']}: {{{atoms}}}")
            lines.append(f"{eq['id']} = (" + "; ".join(parts) + ")")
        for co in self.coalitions:
            items = []
            for a in co["assignments"]:
                item = f"{a['goal']} <- {a['agent']} via {a['plan']}"
                if self.mode == "possibilistic":
                    item += f" [{a['necessity']}]"
                items.append(item)
            lines.append(f"{co['id']}: " + ("; ".join(items) if items else "no goals"))
        if self.unachievable_goals:
            lines.append("unachievable: " + ", ".join(self.unachievable_goals))
        if self.metrics is not None:
            header = ["alternative"] + self.metrics["columns"]
            lines.append("\t".join(header))
            for row in self.metrics["rows"]:
                lines.append("\t".join([row["alternative"]] + [row["values"][c] for c in self.metrics["columns"]]))
        if self.ranking is not None:
            ranked = ", ".join(f"{e['alternative']} ({e['score']})" for e in self.ranking["entries"])
            lines.append(f"ranking by {self.ranking['method']}: {ranked}")
        lines += [f"note: {d}" for d in self.diagnostics]
        if self.mcs is not None:
            lines.append("")
            lines.append(self.mcs.rstrip("\n"))
        if self.dot is not None:
            for name, text in self.dot.items():
                lines.append("")
                lines.append(f"// {name}")
                lines.append(text.rstrip("\n"))
        return "\n".join(lines) + "\n"
