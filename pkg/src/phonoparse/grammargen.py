"""Random toy grammars and a fixed benchmark grammar.

The random generator backs the oracle-equivalence suite: grammars small
enough to check exhaustively, but varied enough to exercise rule modes,
environment shapes, anchoring, boundaries, and optional sub-sequences.
Specs get distinct, fully instantiated bundles over single-character
graphemes, so rendering a derived word either reproduces exactly one
grapheme per segment or proves the word has no surface form at all.
"""

from __future__ import annotations

import random
import string

from .alphabet import Alphabet, SegmentSpecification
from .analysis import AnalysisConfig
from .features import FeatureBundle, binary_feature_system
from .lexicon import Lexicon
from .pipeline import Grammar, Stratum
from .rules import (
    BOUNDARY,
    BundleTerm,
    EnvironmentTemplate,
    OptionalTerm,
    PhonologicalRule,
    RuleMode,
)

FEATURE_POOL = ("f1", "f2", "f3", "f4")


def random_bundle(rng: random.Random, features, low=1, high=2) -> FeatureBundle:
    count = rng.randint(low, min(high, len(features)))
    names = rng.sample(list(features), count)
    return FeatureBundle({name: rng.choice("+-") for name in names})


def random_environment(rng: random.Random, features) -> EnvironmentTemplate:
    terms = []
    for _ in range(rng.randint(0, 2)):
        roll = rng.random()
        if roll < 0.12:
            terms.append(BOUNDARY)
        elif roll < 0.24:
            sub = (BundleTerm(random_bundle(rng, features)),)
            low = rng.randint(0, 1)
            terms.append(OptionalTerm(sub, low, rng.randint(max(low, 1), 2)))
        else:
            terms.append(BundleTerm(random_bundle(rng, features)))
    return EnvironmentTemplate(tuple(terms), anchored=rng.random() < 0.2)


def random_feature_changing_rule(rng: random.Random, features, name: str) -> PhonologicalRule:
    return PhonologicalRule(
        name,
        input=(random_bundle(rng, features),),
        output=(random_bundle(rng, features),),
        left_env=random_environment(rng, features),
        right_env=random_environment(rng, features),
        mode=rng.choice(list(RuleMode)),
    )


def random_grammar(rng: random.Random, *, max_rules: int = 3, max_specs: int = 6,
                   max_features: int = 4, max_entries: int = 12,
                   max_entry_length: int = 6) -> tuple[Grammar, Lexicon]:
    """A small feature-changing grammar plus a lexicon over its alphabet."""
    features = FEATURE_POOL[:rng.randint(2, max_features)]
    system = binary_feature_system(*features)

    spec_count = rng.randint(2, min(max_specs, 2 ** len(features)))
    assignments = rng.sample(range(2 ** len(features)), spec_count)
    specs = []
    for grapheme, bits in zip(string.ascii_lowercase, assignments):
        bundle = FeatureBundle({name: "+" if bits >> i & 1 else "-"
                                for i, name in enumerate(features)})
        specs.append(SegmentSpecification(grapheme, bundle))
    alphabet = Alphabet(specs)

    rules = tuple(random_feature_changing_rule(rng, features, f"r{i}")
                  for i in range(rng.randint(0, max_rules)))
    grammar = Grammar(system, alphabet, alphabet, (Stratum("default", rules),),
                      AnalysisConfig())

    lexicon = Lexicon(alphabet=alphabet)
    graphemes = [spec.grapheme for spec in specs]
    for i in range(rng.randint(1, max_entries)):
        length = rng.randint(1, max_entry_length)
        letters = [rng.choice(graphemes) for _ in range(length)]
        if length > 1 and rng.random() < 0.3:
            letters.insert(rng.randint(1, length - 1), "+")
        lexicon.add_shape("".join(letters), f"g{i}")
    return grammar, lexicon


def forward_image(grammar: Grammar, lexicon: Lexicon) -> dict[str, list]:
    """Map each reachable surface form to the entries that derive it."""
    from .pipeline import synthesize
    from .alphabet import UnrenderableError
    from .synthesis import EmptyWordError

    image: dict[str, list] = {}
    for entry in lexicon:
        try:
            surface = synthesize(entry, grammar)
        except (UnrenderableError, EmptyWordError):
            continue
        image.setdefault(surface, []).append(entry)
    return image


def benchmark_grammar(lengths=(4, 8, 12, 16, 20, 24, 28, 32)) -> tuple[Grammar, Lexicon, list[str]]:
    """Fixed eight-rule grammar and one parseable surface form per length.

    The consonant inventory covers the full (voiced, cont, high) cube so any
    combination of rule effects stays renderable.
    """
    system = binary_feature_system("cons", "voiced", "cont", "high")

    def spec(g, **kw):
        return SegmentSpecification(g, FeatureBundle(kw))

    consonants = []
    graphemes = iter("pbfvkgxq")
    for high in "-+":
        for cont in "-+":
            for voiced in "-+":
                consonants.append(spec(next(graphemes), cons="+", voiced=voiced,
                                        cont=cont, high=high))
    vowels = [spec("a", cons="-", voiced="+", cont="+", high="-"),
              spec("i", cons="-", voiced="+", cont="+", high="+")]
    alphabet = Alphabet(consonants + vowels)

    def fb(**kw):
        return FeatureBundle(kw)

    def env(*bundles, anchored=False):
        return EnvironmentTemplate(tuple(BundleTerm(b) for b in bundles), anchored)

    rules = (
        PhonologicalRule("devoice_cluster", (fb(cons="+"),), (fb(voiced="-"),),
                         right_env=env(fb(voiced="-"))),
        PhonologicalRule("intervocalic_voice", (fb(cons="+"),), (fb(voiced="+"),),
                         left_env=env(fb(cons="-")), right_env=env(fb(cons="-")),
                         mode=RuleMode.SIMULTANEOUS),
        PhonologicalRule("spirantize", (fb(cons="+", cont="-"),), (fb(cont="+"),),
                         left_env=env(fb(cons="-", high="+"))),
        PhonologicalRule("velarize", (fb(cons="+"),), (fb(high="+"),),
                         right_env=env(fb(high="+")), mode=RuleMode.RL_ITERATIVE),
        PhonologicalRule("raise_vowel", (fb(cons="-"),), (fb(high="+"),),
                         left_env=env(fb(cons="+", high="+"))),
        PhonologicalRule("harden", (fb(cons="+", cont="+"),), (fb(cont="-"),),
                         left_env=env(fb(cons="+"))),
        PhonologicalRule("final_devoice", (fb(cons="+"),), (fb(voiced="-"),),
                         right_env=EnvironmentTemplate(anchored=True)),
        PhonologicalRule("height_assimilation", (fb(cons="+"),), (fb(high="-"),),
                         right_env=env(fb(cons="-", high="-"))),
    )
    grammar = Grammar(system, alphabet, alphabet, (Stratum("default", rules),),
                      AnalysisConfig())

    lexicon = Lexicon(alphabet=alphabet)
    from .pipeline import synthesize

    surfaces = []
    for length in lengths:
        syllables = ["pa", "bi", "ka", "gi"]
        shape = "".join(syllables[i % 4] for i in range(length // 2))[:length]
        entry = lexicon.add_shape(shape, f"len{length}")
        surfaces.append(synthesize(entry, grammar))
    return grammar, lexicon, surfaces
