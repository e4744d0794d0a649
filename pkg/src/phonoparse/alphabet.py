"""Alphabets, segments, words, and text <-> segment translation.

Translation from text is deterministic greedy longest-match, left to right.
Boundary marker characters (by default ``+``) are not segments: they are
consumed into the word's boundary set.  Rendering inverts translation and
uses a fixed surface grammar so traces are reproducible byte for byte:
an ambiguous segment prints as ``[g1 g2 ...]`` over every spec it unifies
with, an optional segment is wrapped in parentheses, and a known morpheme
boundary prints as ``+``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .features import EMPTY_BUNDLE, FeatureBundle, OPTIONAL_FEATURE, unify


class UntranslatableError(ValueError):
    """No grapheme of the alphabet matches the text at some offset."""

    def __init__(self, text: str, offset: int, reason: str = "no grapheme matches"):
        super().__init__(f"cannot translate {text!r} at offset {offset}: {reason}")
        self.text = text
        self.offset = offset


class UnrenderableError(ValueError):
    """A segment unifies with no segment-specification of the alphabet."""

    def __init__(self, index: int):
        super().__init__(f"segment {index} matches no specification of the alphabet")
        self.index = index


@dataclass(frozen=True)
class SegmentSpecification:
    """A grapheme (one or more characters) plus the features it stands for."""

    grapheme: str
    bundle: FeatureBundle

    def __post_init__(self) -> None:
        if not self.grapheme:
            raise ValueError("grapheme must be non-empty")
        if self.bundle.has_variables():
            raise ValueError(f"spec {self.grapheme!r}: variables not allowed")
        if OPTIONAL_FEATURE in self.bundle:
            raise ValueError(f"spec {self.grapheme!r}: 'optional' is engine-managed")


class Alphabet:
    """An ordered collection of segment-specifications.

    Declaration order is significant: it fixes the order of grapheme
    candidates in rendered output.  One alphabet may serve as both the
    surface and the lexical alphabet.
    """

    def __init__(self, specs, boundary_markers=("+",), role: str = "both"):
        self.specs: tuple[SegmentSpecification, ...] = tuple(specs)
        self.boundary_markers: frozenset[str] = frozenset(boundary_markers)
        self.role = role
        if not self.specs:
            raise ValueError("an alphabet needs at least one specification")
        seen = set()
        for spec in self.specs:
            if spec.grapheme in seen:
                raise ValueError(f"duplicate grapheme {spec.grapheme!r}")
            seen.add(spec.grapheme)
        for marker in self.boundary_markers:
            if len(marker) != 1:
                raise ValueError(f"boundary marker {marker!r} must be one character")
            for spec in self.specs:
                if spec.grapheme.startswith(marker):
                    raise ValueError(
                        f"grapheme {spec.grapheme!r} begins with boundary marker {marker!r}")
        # longest first, so greedy matching can take the first hit
        self._by_length = sorted(self.specs, key=lambda s: -len(s.grapheme))

    def feature_names(self) -> frozenset[str]:
        """Every feature name mentioned by some specification."""
        names: set[str] = set()
        for spec in self.specs:
            names.update(spec.bundle)
        return frozenset(names)

    def __iter__(self):
        return iter(self.specs)

    def __repr__(self) -> str:
        return f"Alphabet({[s.grapheme for s in self.specs]!r}, role={self.role!r})"


@dataclass(frozen=True)
class Segment:
    """A feature bundle plus the engine-managed optionality flag."""

    bundle: FeatureBundle
    optional: bool = False


@dataclass(frozen=True)
class Word:
    """A sequence of segments plus morpheme-boundary bookkeeping.

    ``boundaries`` holds inter-segment indices: index i marks a boundary
    between segments i-1 and i.  Words produced during analysis carry
    ``boundaries_known=False`` because boundary positions cannot be seen in
    a surface form.  ``diacritics`` carries word-level nonphonetic features
    (attached from a lexical entry after lookup).
    """

    segments: tuple[Segment, ...]
    boundaries: frozenset[int] = frozenset()
    boundaries_known: bool = True
    diacritics: FeatureBundle = field(default=EMPTY_BUNDLE)

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a word needs at least one segment")
        n = len(self.segments)
        for b in self.boundaries:
            if not 1 <= b <= n - 1:
                raise ValueError(f"boundary index {b} outside 1..{n - 1}")

    def __len__(self) -> int:
        return len(self.segments)

    def __getitem__(self, i: int) -> Segment:
        return self.segments[i]

    def with_segments(self, segments, boundaries=None) -> "Word":
        return replace(self, segments=tuple(segments),
                       boundaries=self.boundaries if boundaries is None
                       else frozenset(boundaries))

    def with_unknown_boundaries(self) -> "Word":
        return replace(self, boundaries=frozenset(), boundaries_known=False)

    def instantiated_feature_count(self) -> int:
        return sum(len(seg.bundle) for seg in self.segments)


def to_segments(text: str, alphabet: Alphabet) -> Word:
    """Translate text into a word by greedy longest-match segmentation.

    Boundary marker characters become entries in the word's boundary set
    rather than segments.  Raises UntranslatableError when no grapheme
    matches at some offset, or when a marker sits where no boundary can
    (before the first or after the last segment).
    """
    segments: list[Segment] = []
    boundaries: set[int] = set()
    last_marker_offset = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in alphabet.boundary_markers:
            if not segments:
                raise UntranslatableError(text, i, "boundary marker before any segment")
            boundaries.add(len(segments))
            last_marker_offset = i
            i += 1
            continue
        for spec in alphabet._by_length:
            if text.startswith(spec.grapheme, i):
                segments.append(Segment(spec.bundle, optional=False))
                i += len(spec.grapheme)
                break
        else:
            raise UntranslatableError(text, i)
    if not segments:
        raise UntranslatableError(text, 0, "empty after boundary-marker extraction")
    if len(segments) in boundaries:
        raise UntranslatableError(text, last_marker_offset,
                                  "boundary marker after the last segment")
    return Word(tuple(segments), frozenset(boundaries), boundaries_known=True)


def grapheme_candidates(segment: Segment, alphabet: Alphabet) -> tuple[SegmentSpecification, ...]:
    """All specs whose bundle unifies with the segment's, in alphabet order."""
    return tuple(spec for spec in alphabet.specs
                 if unify(spec.bundle, segment.bundle) is not None)


def render(word: Word, alphabet: Alphabet, include_boundaries: bool = True,
           *, placeholder: str | None = None) -> str:
    """Render a word back into text.

    A segment with several grapheme candidates prints as ``[g1 g2 ...]``,
    an optional segment is wrapped in ``( )``, and morpheme boundaries (when
    known and requested) print as ``+``.  A segment matching no spec raises
    UnrenderableError unless a ``placeholder`` string is supplied.
    """
    pieces: list[str] = []
    for i, segment in enumerate(word.segments):
        if include_boundaries and word.boundaries_known and i in word.boundaries:
            pieces.append("+")
        candidates = grapheme_candidates(segment, alphabet)
        if not candidates:
            if placeholder is None:
                raise UnrenderableError(i)
            body = placeholder
        elif len(candidates) == 1:
            body = candidates[0].grapheme
        else:
            body = "[" + " ".join(spec.grapheme for spec in candidates) + "]"
        pieces.append(f"({body})" if segment.optional else body)
    return "".join(pieces)
