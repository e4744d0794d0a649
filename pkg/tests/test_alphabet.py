"""Translation, rendering, and their round trip."""

import pytest
from hypothesis import given, strategies as st

from phonoparse.alphabet import (
    Alphabet,
    Segment,
    UnrenderableError,
    UntranslatableError,
    Word,
    grapheme_candidates,
    render,
    to_segments,
)
from phonoparse.features import EMPTY_BUNDLE, FeatureBundle

from conftest import fb, spec


@pytest.fixture
def english_ish():
    # every spec instantiates the same features, so candidates stay unique
    return Alphabet([
        spec("sh", cons="+", cont="+", strident="+", high="+", voiced="-"),
        spec("s", cons="+", cont="+", strident="+", high="-", voiced="-"),
        spec("h", cons="+", cont="+", strident="-", high="-", voiced="-"),
        spec("m", cons="+", cont="-", strident="-", high="-", voiced="+"),
        spec("p", cons="+", cont="-", strident="-", high="-", voiced="-"),
        spec("i", cons="-", cont="+", strident="-", high="+", voiced="+"),
        spec("a", cons="-", cont="+", strident="-", high="-", voiced="+"),
    ])


def graphemes_of(word, alphabet):
    out = []
    for segment in word.segments:
        candidates = grapheme_candidates(segment, alphabet)
        assert len(candidates) == 1
        out.append(candidates[0].grapheme)
    return out


# ------------------------------------------------------------ translation

def test_greedy_longest_match_takes_sh_in_mishap(english_ish):
    word = to_segments("mishap", english_ish)
    assert graphemes_of(word, english_ish) == ["m", "i", "sh", "a", "p"]


def test_boundary_marker_recorded_not_segmented(jp_alphabet):
    word = to_segments("ne+ta", jp_alphabet)
    assert len(word) == 4
    assert word.boundaries == frozenset({2})
    assert word.boundaries_known


def test_untranslatable_reports_offset(jp_alphabet):
    with pytest.raises(UntranslatableError) as err:
        to_segments("nqa", jp_alphabet)
    assert err.value.offset == 1


def test_boundary_at_edges_rejected(jp_alphabet):
    with pytest.raises(UntranslatableError):
        to_segments("+ne", jp_alphabet)
    with pytest.raises(UntranslatableError):
        to_segments("ne+", jp_alphabet)
    with pytest.raises(UntranslatableError):
        to_segments("+", jp_alphabet)


def test_every_translated_segment_is_not_optional(english_ish):
    word = to_segments("mishap", english_ish)
    assert all(not segment.optional for segment in word.segments)


def test_translation_deterministic(english_ish):
    assert to_segments("mishap", english_ish) == to_segments("mishap", english_ish)


# -------------------------------------------------------------- candidates

def test_fully_instantiated_segment_has_single_candidate(jp_alphabet):
    word = to_segments("t", jp_alphabet)
    assert [s.grapheme for s in grapheme_candidates(word[0], jp_alphabet)] == ["t"]


def test_nonround_vowel_slot_covers_i_e_a(jp_alphabet):
    segment = Segment(fb(voc="+", round="-"))
    assert [s.grapheme for s in grapheme_candidates(segment, jp_alphabet)] == ["i", "e", "a"]


def test_empty_bundle_matches_every_spec(jp_alphabet):
    segment = Segment(EMPTY_BUNDLE)
    assert len(grapheme_candidates(segment, jp_alphabet)) == len(jp_alphabet.specs)


# ----------------------------------------------------------------- render

def test_render_plain_word(jp_alphabet):
    assert render(to_segments("neta", jp_alphabet), jp_alphabet) == "neta"


def test_render_brackets_and_parens(jp_alphabet):
    word = Word((
        Segment(fb(voc="-", cons="+", son="+", nas="+", cont="-", voiced="+",
                   high="-", back="-", round="-")),
        Segment(fb(voc="+", round="-"), optional=True),
    ))
    assert render(word, jp_alphabet) == "n([i e a])"


def test_render_known_boundaries_as_plus(jp_alphabet):
    word = to_segments("ne+ta", jp_alphabet)
    assert render(word, jp_alphabet) == "ne+ta"
    assert render(word, jp_alphabet, include_boundaries=False) == "neta"
    assert render(word.with_unknown_boundaries(), jp_alphabet) == "neta"


def test_render_unmatched_segment_raises_or_placeholder(jp_alphabet):
    word = Word((Segment(fb(voc="+", cons="+")),))
    with pytest.raises(UnrenderableError):
        render(word, jp_alphabet)
    assert render(word, jp_alphabet, placeholder="?") == "?"


def test_round_trip_boundary_free(jp_alphabet):
    for text in ("neta", "netai", "nenene", "tarou"):
        assert render(to_segments(text, jp_alphabet), jp_alphabet) == text


ROUND_TRIP_ALPHABET = Alphabet(
    [spec(g, **{"f" + h: ("+" if h == g else "-") for h in "nteiaoru"})
     for g in "nteiaoru"])


@given(st.lists(st.sampled_from("nteiaoru"), min_size=1, max_size=10))
def test_round_trip_random_texts(letters):
    text = "".join(letters)
    assert render(to_segments(text, ROUND_TRIP_ALPHABET), ROUND_TRIP_ALPHABET) == text


# ------------------------------------------------------------- validation

def test_alphabet_rejects_duplicate_graphemes():
    with pytest.raises(ValueError):
        Alphabet([spec("a", voc="+"), spec("a", voc="-")])


def test_alphabet_rejects_marker_initial_grapheme():
    with pytest.raises(ValueError):
        Alphabet([spec("+a", voc="+")])


def test_alphabet_needs_a_spec():
    with pytest.raises(ValueError):
        Alphabet([])


def test_spec_rejects_optional_and_variables():
    from phonoparse.features import VariableRef
    with pytest.raises(ValueError):
        spec("a", optional="+")
    with pytest.raises(ValueError):
        SegmentSpecification = type(spec("a", voc="+"))
        SegmentSpecification("b", FeatureBundle(voc=VariableRef("x")))


def test_word_validates_boundary_range():
    s = Segment(fb(voc="+"))
    with pytest.raises(ValueError):
        Word((s, s), boundaries=frozenset({2}))
    with pytest.raises(ValueError):
        Word((s, s), boundaries=frozenset({0}))
    Word((s, s), boundaries=frozenset({1}))


def test_word_needs_a_segment():
    with pytest.raises(ValueError):
        Word(())
