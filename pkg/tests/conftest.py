"""Shared fixtures: the Japanese grammar, and small toy grammars."""

from pathlib import Path

import pytest

from phonoparse.alphabet import Alphabet, SegmentSpecification
from phonoparse.features import FeatureBundle, binary_feature_system
from phonoparse.grammar_io import CommandInterpreter
from phonoparse.pipeline import Grammar, Stratum
from phonoparse.rules import (
    BundleTerm,
    EnvironmentTemplate,
    PhonologicalRule,
    RuleMode,
)

GRAMMAR_DIR = Path(__file__).resolve().parent.parent / "grammars"


def fb(**features) -> FeatureBundle:
    return FeatureBundle(features)


def spec(grapheme, **features) -> SegmentSpecification:
    return SegmentSpecification(grapheme, FeatureBundle(features))


def env(*bundles, anchored=False) -> EnvironmentTemplate:
    """Environment of plain bundle terms, given innermost first."""
    return EnvironmentTemplate(tuple(BundleTerm(b) for b in bundles), anchored)


@pytest.fixture(scope="session")
def japanese():
    """Interpreter with the shipped Japanese grammar and lexicon loaded."""
    interp = CommandInterpreter()
    interp.run_file(GRAMMAR_DIR / "japanese.grammar")
    interp.run_file(GRAMMAR_DIR / "japanese.lexicon")
    return interp


@pytest.fixture(scope="session")
def jp_grammar(japanese):
    return japanese.grammar()


@pytest.fixture(scope="session")
def jp_lexicon(japanese):
    return japanese.lexicon()


@pytest.fixture(scope="session")
def jp_alphabet(jp_grammar):
    return jp_grammar.surface_alphabet


def obstruent_alphabet() -> Alphabet:
    """a f x p k over sonorance, continuancy, and backness."""
    return Alphabet([
        spec("a", son="+", cont="+"),
        spec("f", son="-", cont="+", back="-"),
        spec("x", son="-", cont="+", back="+"),
        spec("p", son="-", cont="-", back="-"),
        spec("k", son="-", cont="-", back="+"),
    ])


def spirantization_rule(mode=RuleMode.SIMULTANEOUS) -> PhonologicalRule:
    return PhonologicalRule(
        "spirantize",
        input=(fb(son="-"),),
        output=(fb(cont="+"),),
        right_env=env(fb(cont="-")),
        mode=mode,
    )


def stop_alphabet() -> Alphabet:
    """a t d over continuancy and voicing."""
    return Alphabet([
        spec("a", cont="+", voiced="+"),
        spec("t", cont="-", voiced="-"),
        spec("d", cont="-", voiced="+"),
    ])


def devoicing_rule(mode=RuleMode.LR_ITERATIVE) -> PhonologicalRule:
    return PhonologicalRule(
        "devoice",
        input=(fb(cont="-"),),
        output=(fb(voiced="-"),),
        right_env=env(fb(voiced="-")),
        mode=mode,
    )


def stop_grammar(mode=RuleMode.LR_ITERATIVE) -> Grammar:
    alphabet = stop_alphabet()
    system = binary_feature_system("cont", "voiced")
    return Grammar(system, alphabet, alphabet,
                   (Stratum("default", (devoicing_rule(mode),)),))
