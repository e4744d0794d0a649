"""The generate-and-test cycle, plus a brute-force oracle for testing.

Parsing translates the surface text, unapplies every stratum's rules in
reverse, looks the resulting virtual word up in the lexicon, and then tests
each candidate by running its underlying form forward through all rules:
candidates whose derived surface form does not match the input are thrown
out.  The full derivation is recorded as a trace tree on the way.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import AbstractSet, Iterable

from .alphabet import Alphabet, UnrenderableError, Word, render, to_segments
from .analysis import AnalysisConfig, unapply
from .features import FeatureSystem, OPTIONAL_FEATURE, UnboundVariableError
from .lexicon import LexicalEntry, Lexicon, lookup
from .rules import PhonologicalRule
from .synthesis import EmptyWordError, apply
from .trace import (
    Diagnostic,
    EntryView,
    LexLookup,
    RuleApp,
    RuleUnapp,
    SuccLookup,
    TraceRoot,
    WordAnalysisLeaf,
)


class WordTooLongError(ValueError):
    """Input exceeds the configured segment cap (guards undeletion blowup)."""


@dataclass(frozen=True)
class Stratum:
    """A named, ordered block of rules; strata apply in declaration order."""

    name: str
    rules: tuple[PhonologicalRule, ...]


@dataclass(frozen=True)
class Grammar:
    """Everything but the lexicon: features, alphabets, rule strata, caps."""

    feature_system: FeatureSystem
    surface_alphabet: Alphabet
    lexical_alphabet: Alphabet
    strata: tuple[Stratum, ...]
    config: AnalysisConfig = field(default_factory=AnalysisConfig)
    max_word_segments: int = 64

    def __post_init__(self) -> None:
        if not self.strata:
            raise ValueError("a grammar needs at least one stratum")
        names = [rule.name for stratum in self.strata for rule in stratum.rules]
        if len(names) != len(set(names)):
            raise ValueError("rule names must be unique across the grammar")

    def rules_forward(self) -> list[PhonologicalRule]:
        return [rule for stratum in self.strata for rule in stratum.rules]

    def surface_feature_names(self) -> frozenset[str]:
        """The feature inventory surface comparison is restricted to."""
        names = self.surface_alphabet.feature_names()
        return names - self.feature_system.diacritics - {OPTIONAL_FEATURE}


@dataclass
class WordAnalysis:
    """One surviving parse: the entry, its derived surface form, the trace."""

    entry: LexicalEntry
    derived_surface: Word
    trace: TraceRoot


def compare(derived: Word, original: Word, surface_features: AbstractSet[str]) -> bool:
    """Segment-wise identity restricted to the surface feature inventory.

    Morpheme boundaries and diacritic features play no part; length must
    match exactly.
    """
    if len(derived) != len(original):
        return False
    for d, o in zip(derived.segments, original.segments):
        d_restricted = {n: v for n, v in d.bundle.items() if n in surface_features}
        o_restricted = {n: v for n, v in o.bundle.items() if n in surface_features}
        if d_restricted != o_restricted:
            return False
    return True


def _view(word: Word, alphabet: Alphabet, gloss: str | None = None) -> EntryView:
    # lenient rendering: a trace must never abort the parse it describes
    return EntryView(render(word, alphabet, placeholder="?"), gloss)


def parse(surface: str, grammar: Grammar, lexicon: Lexicon) -> list[WordAnalysis]:
    """All lexical analyses of a surface form, each carrying the full trace."""
    analyses, _ = parse_with_trace(surface, grammar, lexicon)
    return analyses


def parse_with_trace(surface: str, grammar: Grammar,
                     lexicon: Lexicon) -> tuple[list[WordAnalysis], TraceRoot]:
    """Like parse, but also hands back the trace root even with no analyses."""
    original = to_segments(surface, grammar.surface_alphabet)
    if len(original) > grammar.max_word_segments:
        raise WordTooLongError(
            f"{surface!r} has {len(original)} segments; the grammar caps parses "
            f"at {grammar.max_word_segments}")
    root = TraceRoot(shape=surface)
    cursor = root.continuations

    virtual = original.with_unknown_boundaries()
    for stratum in reversed(grammar.strata):
        for rule in reversed(stratum.rules):
            before = virtual
            virtual = unapply(rule, virtual, grammar.config)
            event = RuleUnapp(rule.name,
                              _view(before, grammar.surface_alphabet),
                              _view(virtual, grammar.surface_alphabet))
            cursor.append(event)
            cursor = event.continuations

    matches = lookup(virtual, lexicon)
    lex_event = LexLookup(_view(virtual, grammar.surface_alphabet))
    cursor.append(lex_event)

    surface_features = grammar.surface_feature_names()
    analyses: list[WordAnalysis] = []
    seen: set[tuple[int, str]] = set()
    for match in matches:
        entry = match.entry
        succ = SuccLookup(EntryView(entry.shape, entry.gloss))
        lex_event.continuations.append(succ)
        branch = succ.continuations
        word = replace(entry.underlying, diacritics=entry.diacritics)
        failed = None
        for stratum in grammar.strata:
            for rule in stratum.rules:
                before = word
                try:
                    word = apply(rule, word)
                except (EmptyWordError, UnboundVariableError) as error:
                    failed = str(error)
                    break
                event = RuleApp(rule.name,
                                _view(before, grammar.lexical_alphabet, entry.gloss),
                                _view(word, grammar.lexical_alphabet, entry.gloss))
                branch.append(event)
                branch = event.continuations
            if failed:
                break
        if failed:
            branch.append(Diagnostic(failed))
            continue
        if not compare(word, original, surface_features):
            continue
        leaf_shape = render(word, grammar.surface_alphabet,
                            include_boundaries=False, placeholder="?")
        key = (id(entry), leaf_shape)
        if key in seen:
            continue
        seen.add(key)
        branch.append(WordAnalysisLeaf(EntryView(leaf_shape, entry.gloss)))
        analyses.append(WordAnalysis(entry, word, root))
    return analyses, root


def synthesize(entry: LexicalEntry, grammar: Grammar) -> str:
    """Derive the entry's surface text by running every stratum forward."""
    word = replace(entry.underlying, diacritics=entry.diacritics)
    for stratum in grammar.strata:
        for rule in stratum.rules:
            word = apply(rule, word)
    return render(word, grammar.surface_alphabet, include_boundaries=False)


def brute_force_parse(surface: str, grammar: Grammar,
                      lexicon: Lexicon) -> list[LexicalEntry]:
    """Test oracle: every entry whose forward derivation equals the surface.

    Implements the definition of a correct parse by exhaustive enumeration;
    entries whose derivation fails or cannot be rendered have no surface
    form and are skipped.
    """
    found = []
    for entry in lexicon:
        try:
            if synthesize(entry, grammar) == surface:
                found.append(entry)
        except (EmptyWordError, UnboundVariableError, UnrenderableError):
            continue
    return found
