"""Lexical entries and unification-based lookup.

Lookup aligns the virtual word produced by unapplication against each
entry's underlying form.  Every non-optional virtual segment must align,
in order, to a lexical segment by unification; an [+optional] virtual
segment may instead be dropped (it was only a guess that something might
have been deleted or epenthesized there).  Every lexical segment must be
covered.  Morpheme boundaries in the entry play no role here: the virtual
word cannot know where they are.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .alphabet import Alphabet, Segment, Word, to_segments
from .features import EMPTY_BUNDLE, FeatureBundle, unify


@dataclass(frozen=True)
class LexicalEntry:
    """A lexical shape, its gloss, and the translated underlying word."""

    shape: str
    gloss: str
    underlying: Word
    diacritics: FeatureBundle = field(default=EMPTY_BUNDLE)

    @classmethod
    def from_shape(cls, shape: str, gloss: str, alphabet: Alphabet,
                   diacritics: FeatureBundle = EMPTY_BUNDLE) -> "LexicalEntry":
        word = to_segments(shape, alphabet)
        word = replace(word, diacritics=diacritics)
        return cls(shape, gloss, word, diacritics)


@dataclass(frozen=True)
class LookupMatch:
    """One alignment of the virtual word against one entry.

    ``kept`` lists the virtual-segment indices aligned (in order) to the
    entry's segments; ``dropped`` the optional virtual segments passed over.
    Together they partition the virtual word.
    """

    entry: LexicalEntry
    kept: tuple[int, ...]
    dropped: tuple[int, ...]


class Lexicon:
    """Ordered entry collection with a first-grapheme index.

    Shapes need not be unique; homographs each produce their own matches.
    The index only accelerates lookup, it never changes results.
    """

    def __init__(self, entries=(), alphabet: Alphabet | None = None):
        self.entries: list[LexicalEntry] = []
        self._alphabet = alphabet
        self._by_first_grapheme: dict[str, list[int]] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexicalEntry) -> None:
        index = len(self.entries)
        self.entries.append(entry)
        if self._alphabet is not None:
            grapheme = _first_grapheme(entry.shape, self._alphabet)
            if grapheme is not None:
                self._by_first_grapheme.setdefault(grapheme, []).append(index)

    def add_shape(self, shape: str, gloss: str,
                  diacritics: FeatureBundle = EMPTY_BUNDLE) -> LexicalEntry:
        if self._alphabet is None:
            raise ValueError("this lexicon was built without an alphabet")
        entry = LexicalEntry.from_shape(shape, gloss, self._alphabet, diacritics)
        self.add(entry)
        return entry

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def candidate_ids(self, virtual: Word) -> list[int]:
        """Entry indices worth aligning, in declaration order."""
        if self._alphabet is None or not self._by_first_grapheme:
            return list(range(len(self.entries)))
        first = virtual.segments[0]
        if first.optional:
            return list(range(len(self.entries)))
        allowed = set()
        for spec in self._alphabet.specs:
            if unify(spec.bundle, first.bundle) is not None:
                allowed.update(self._by_first_grapheme.get(spec.grapheme, ()))
        return sorted(allowed)


def _first_grapheme(shape: str, alphabet: Alphabet) -> str | None:
    i = 0
    while i < len(shape) and shape[i] in alphabet.boundary_markers:
        i += 1
    for spec in alphabet._by_length:
        if shape.startswith(spec.grapheme, i):
            return spec.grapheme
    return None


def _alignments(virtual: tuple[Segment, ...], lexical: tuple[Segment, ...]):
    """Yield (kept, dropped) index partitions, align-first order."""

    def walk(vi: int, li: int, kept: tuple[int, ...], dropped: tuple[int, ...]):
        if vi == len(virtual):
            if li == len(lexical):
                yield kept, dropped
            return
        segment = virtual[vi]
        if li < len(lexical) and unify(segment.bundle, lexical[li].bundle) is not None:
            yield from walk(vi + 1, li + 1, kept + (vi,), dropped)
        if segment.optional:
            yield from walk(vi + 1, li, kept, dropped + (vi,))

    yield from walk(0, 0, (), ())


def lookup(virtual: Word, lexicon: Lexicon) -> list[LookupMatch]:
    """All entry alignments of a virtual word, in lexicon order."""
    matches: list[LookupMatch] = []
    seen: set[tuple[int, tuple[int, ...]]] = set()
    for index in lexicon.candidate_ids(virtual):
        entry = lexicon.entries[index]
        for kept, dropped in _alignments(virtual.segments, entry.underlying.segments):
            key = (index, kept)
            if key in seen:
                continue
            seen.add(key)
            matches.append(LookupMatch(entry, kept, dropped))
    return matches
