"""Derivation trace tree, filtering, and the two output formats.

The parser always builds the full tree; what the user asked to see is
decided at emission time.  An event that is not traced is elided from the
output, its continuations splicing up into its parent, so the tree
structure of the traced events is preserved.  The text format nests
angle-bracket structures; the structured format is one JSON object per
event with stable field names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterator, Union


@dataclass(frozen=True)
class EntryView:
    """Rendered shape (plus gloss, when one exists) shown in trace output."""

    shape: str
    gloss: str | None = None

    def format(self) -> str:
        if self.gloss is None:
            return f'<lex_entry shape "{self.shape}">'
        return f'<lex_entry shape "{self.shape}" gloss "{self.gloss}">'


@dataclass
class TraceRoot:
    shape: str
    continuations: list["TraceEvent"] = field(default_factory=list)


@dataclass
class RuleUnapp:
    rname: str
    input: EntryView
    output: EntryView
    continuations: list["TraceEvent"] = field(default_factory=list)


@dataclass
class LexLookup:
    virtual: EntryView
    continuations: list["TraceEvent"] = field(default_factory=list)


@dataclass
class SuccLookup:
    real: EntryView
    continuations: list["TraceEvent"] = field(default_factory=list)


@dataclass
class RuleApp:
    rname: str
    input: EntryView
    output: EntryView
    continuations: list["TraceEvent"] = field(default_factory=list)


@dataclass
class WordAnalysisLeaf:
    entry: EntryView


@dataclass
class Diagnostic:
    """Engine failure that filtered a candidate instead of aborting the parse."""

    message: str


TraceEvent = Union[TraceRoot, RuleUnapp, LexLookup, SuccLookup, RuleApp,
                   WordAnalysisLeaf, Diagnostic]


@dataclass(frozen=True)
class RuleTraceFlags:
    analysis: bool = False
    synthesis: bool = False


@dataclass
class TraceConfig:
    """Which events are visible: lexical lookup, and per-rule unapp/app."""

    lexical_lookup: bool = False
    rules: dict[str, RuleTraceFlags] = field(default_factory=dict)

    def set_rule(self, name: str, analysis: bool, synthesis: bool) -> None:
        self.rules[name] = RuleTraceFlags(analysis, synthesis)

    def traces_rule_analysis(self, name: str) -> bool:
        return self.rules.get(name, RuleTraceFlags()).analysis

    def traces_rule_synthesis(self, name: str) -> bool:
        return self.rules.get(name, RuleTraceFlags()).synthesis

    def any_enabled(self) -> bool:
        return self.lexical_lookup or any(
            flags.analysis or flags.synthesis for flags in self.rules.values())


def _visible(event: TraceEvent, config: TraceConfig) -> bool:
    if isinstance(event, RuleUnapp):
        return config.traces_rule_analysis(event.rname)
    if isinstance(event, RuleApp):
        return config.traces_rule_synthesis(event.rname)
    if isinstance(event, (LexLookup, SuccLookup)):
        return config.lexical_lookup
    return True


def prune(events: list[TraceEvent], config: TraceConfig) -> list[TraceEvent]:
    """Drop untraced events, splicing their continuations into the parent."""
    kept: list[TraceEvent] = []
    for event in events:
        children = getattr(event, "continuations", None)
        pruned_children = prune(children, config) if children is not None else None
        if _visible(event, config):
            if pruned_children is None:
                kept.append(event)
            else:
                kept.append(replace(event, continuations=pruned_children))
        elif pruned_children:
            kept.extend(pruned_children)
    return kept


def _format_event(event: TraceEvent, indent: int) -> list[str]:
    pad = " " * indent
    if isinstance(event, WordAnalysisLeaf):
        return [pad + event.entry.format()]
    if isinstance(event, Diagnostic):
        return [pad + f'<error "{event.message}">']
    if isinstance(event, TraceRoot):
        head = [pad + f'<trace shape "{event.shape}"']
    elif isinstance(event, RuleUnapp):
        head = [pad + f"<rule_unapp rname {event.rname}",
                pad + f" input {event.input.format()}",
                pad + f" output {event.output.format()}"]
    elif isinstance(event, LexLookup):
        head = [pad + f"<lex_lookup virtual {event.virtual.format()}"]
    elif isinstance(event, SuccLookup):
        head = [pad + f"<succ_lookup real {event.real.format()}"]
    elif isinstance(event, RuleApp):
        head = [pad + f"<rule_app rname {event.rname}",
                pad + f" input {event.input.format()}",
                pad + f" output {event.output.format()}"]
    else:
        raise TypeError(f"unknown trace event {event!r}")
    if not event.continuations:
        head[-1] += " continuations ( )>"
        return head
    lines = head
    lines.append(pad + " continuations (")
    for child in event.continuations:
        lines.extend(_format_event(child, indent + 2))
    lines.append(pad + " )>")
    return lines


def format_trace(root: TraceRoot, config: TraceConfig) -> str:
    """Text rendering of the pruned trace; empty string if nothing is traced."""
    if not config.any_enabled():
        return ""
    pruned = prune([root], config)
    lines: list[str] = []
    for event in pruned:
        lines.extend(_format_event(event, 0))
    return "\n".join(lines)


def format_analyses(entries: list[EntryView]) -> str:
    """The final analysis list, printed with or without tracing."""
    if not entries:
        return "(word_analysis )"
    body = "\n".join(" " + view.format() for view in entries)
    return "(word_analysis\n" + body + ")"


def _event_record(event: TraceEvent, depth: int) -> dict:
    if isinstance(event, TraceRoot):
        return {"event": "trace", "depth": depth, "shape": event.shape}
    if isinstance(event, RuleUnapp):
        return {"event": "rule_unapp", "depth": depth, "rname": event.rname,
                "input": event.input.shape, "output": event.output.shape}
    if isinstance(event, LexLookup):
        return {"event": "lex_lookup", "depth": depth, "virtual": event.virtual.shape}
    if isinstance(event, SuccLookup):
        return {"event": "succ_lookup", "depth": depth, "shape": event.real.shape,
                "gloss": event.real.gloss}
    if isinstance(event, RuleApp):
        return {"event": "rule_app", "depth": depth, "rname": event.rname,
                "input": event.input.shape, "output": event.output.shape}
    if isinstance(event, WordAnalysisLeaf):
        return {"event": "analysis", "depth": depth, "shape": event.entry.shape,
                "gloss": event.entry.gloss}
    if isinstance(event, Diagnostic):
        return {"event": "error", "depth": depth, "message": event.message}
    raise TypeError(f"unknown trace event {event!r}")


def _walk(events: list[TraceEvent], depth: int) -> Iterator[tuple[TraceEvent, int]]:
    for event in events:
        yield event, depth
        children = getattr(event, "continuations", None)
        if children:
            yield from _walk(children, depth + 1)


def structured_lines(root: TraceRoot, config: TraceConfig,
                     analyses: list[EntryView]) -> list[str]:
    """Line-delimited JSON rendering of the pruned trace plus the result."""
    lines = []
    if config.any_enabled():
        for event, depth in _walk(prune([root], config), 0):
            lines.append(json.dumps(_event_record(event, depth)))
    for view in analyses:
        lines.append(json.dumps({"event": "word_analysis", "shape": view.shape,
                                 "gloss": view.gloss}))
    return lines


def leaf_views(root: TraceRoot) -> list[EntryView]:
    """Every surviving analysis leaf, in trace order."""
    return [event.entry for event, _ in _walk([root], 0)
            if isinstance(event, WordAnalysisLeaf)]
