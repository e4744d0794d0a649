"""Rule data model, classification, and environment matching.

A rule has an input side, an output side, and a left and right environment
template.  Environments are sequences of terms: feature bundles, optional
sub-sequences with repetition bounds, or morpheme-boundary requirements.
Internally both environments store their terms innermost first, i.e.
``terms[0]`` is the term adjacent to the rule's target; the grammar loader
reverses left environments, which are written outside-in in rule files.

Two matching relations exist.  Analysis matching (used while unapplying
rules to a surface word) is permissive: bundle terms match by unification,
boundary and diacritic requirements are ignored since they cannot be seen
in a surface form, and [+optional] segments may be passed over freely.
Synthesis matching (used while reapplying rules to a lexical word) is
strict: bundle terms match by containment, boundary terms require a
recorded morpheme boundary, and diacritic requirements are checked against
the word's diacritic bundle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .alphabet import Word
from .features import (
    EMPTY_BINDING,
    EMPTY_BUNDLE,
    FeatureBundle,
    VariableBinding,
    contains_pattern,
    overwrite,
    unify,
    unify_pattern,
)

LEFT = "left"
RIGHT = "right"


class InvalidRuleError(ValueError):
    """The rule is structurally ill-formed."""


class RuleMode(enum.Enum):
    LR_ITERATIVE = "lr_iterative"
    RL_ITERATIVE = "rl_iterative"
    SIMULTANEOUS = "simultaneous"


class RuleKind(enum.Enum):
    FEATURE_CHANGING = "feature_changing"
    EPENTHESIS = "epenthesis"
    DELETION = "deletion"


@dataclass(frozen=True)
class BundleTerm:
    """Environment term matching one segment.

    ``diacritics`` holds the nonphonetic entries of the term: they are
    ignored during analysis and checked against the word's diacritic bundle
    during synthesis.  A term whose segmental bundle is empty but whose
    diacritic bundle is not consumes no segment at all.
    """

    bundle: FeatureBundle
    diacritics: FeatureBundle = field(default=EMPTY_BUNDLE)

    def consumes_segment(self) -> bool:
        return bool(self.bundle) or not self.diacritics


@dataclass(frozen=True)
class BoundaryTerm:
    """Requires a morpheme boundary; consumes no segment."""


BOUNDARY = BoundaryTerm()


@dataclass(frozen=True)
class OptionalTerm:
    """A sub-sequence that must repeat between min_repeats and max_repeats times."""

    terms: tuple["EnvTerm", ...]
    min_repeats: int = 0
    max_repeats: int = 1

    def __post_init__(self) -> None:
        if self.min_repeats < 0 or self.max_repeats < self.min_repeats:
            raise InvalidRuleError(
                f"bad repetition bounds ({self.min_repeats}, {self.max_repeats})")


EnvTerm = Union[BundleTerm, BoundaryTerm, OptionalTerm]


@dataclass(frozen=True)
class EnvironmentTemplate:
    """Environment term sequence, innermost term first.

    When ``anchored`` the match must exhaust the word on its side: the last
    segment matched is the word's first (left environment) or last (right
    environment) segment, allowing trailing [+optional] segments to be
    passed over.
    """

    terms: tuple[EnvTerm, ...] = ()
    anchored: bool = False


EMPTY_ENV = EnvironmentTemplate()


def _iter_bundle_terms(terms: Iterable[EnvTerm]) -> Iterator[BundleTerm]:
    for term in terms:
        if isinstance(term, BundleTerm):
            yield term
        elif isinstance(term, OptionalTerm):
            yield from _iter_bundle_terms(term.terms)


def _env_variable_names(env: EnvironmentTemplate) -> frozenset[str]:
    names: set[str] = set()
    for term in _iter_bundle_terms(env.terms):
        names |= term.bundle.variable_names()
        names |= term.diacritics.variable_names()
    return frozenset(names)


@dataclass(frozen=True)
class PhonologicalRule:
    """One linearly ordered rewrite rule.

    Feature-changing rules have exactly one input and one output bundle;
    epenthesis rules have an empty input, deletion rules an empty output.
    Multi-segment inputs or outputs are rejected.  Every variable occurring
    in the output must also occur in the input or in an environment term,
    otherwise synthesis could not resolve it.
    """

    name: str
    input: tuple[FeatureBundle, ...]
    output: tuple[FeatureBundle, ...]
    left_env: EnvironmentTemplate = EMPTY_ENV
    right_env: EnvironmentTemplate = EMPTY_ENV
    mode: RuleMode = RuleMode.LR_ITERATIVE

    def __post_init__(self) -> None:
        if not self.input and not self.output:
            raise InvalidRuleError(f"rule {self.name!r}: input and output both empty")
        if len(self.input) > 1 or len(self.output) > 1:
            raise InvalidRuleError(
                f"rule {self.name!r}: multi-segment inputs/outputs are not supported")
        available = _env_variable_names(self.left_env) | _env_variable_names(self.right_env)
        for bundle in self.input:
            available |= bundle.variable_names()
        unresolved = set()
        for bundle in self.output:
            unresolved |= bundle.variable_names() - available
        if unresolved:
            raise InvalidRuleError(
                f"rule {self.name!r}: output variables {sorted(unresolved)} occur "
                "neither in the input nor in any environment term")

    @property
    def kind(self) -> RuleKind:
        return classify(self)


def classify(rule: PhonologicalRule) -> RuleKind:
    """Epenthesis when the input side is empty, deletion when the output is."""
    if not rule.input and not rule.output:
        raise InvalidRuleError(f"rule {rule.name!r}: input and output both empty")
    if not rule.input:
        return RuleKind.EPENTHESIS
    if not rule.output:
        return RuleKind.DELETION
    return RuleKind.FEATURE_CHANGING


def analysis_target(rule: PhonologicalRule) -> FeatureBundle:
    """Output features plus the non-contradictory features of the input.

    On a name clash the output value wins; variable-valued entries are
    omitted (a variable constrains nothing about the surface value on its
    own).
    """
    pattern = analysis_target_pattern(rule)
    return pattern.without_variables()


def analysis_target_pattern(rule: PhonologicalRule) -> FeatureBundle:
    """Like analysis_target but keeps variable entries for pattern matching."""
    if classify(rule) is not RuleKind.FEATURE_CHANGING:
        raise InvalidRuleError(f"rule {rule.name!r} has no analysis target")
    merged = dict(rule.input[0])
    merged.update(rule.output[0])
    return FeatureBundle(merged)


def _relevant_envs(rule: PhonologicalRule, mode: RuleMode) -> list[EnvironmentTemplate]:
    # Only an environment that is read before the scan reaches it can be
    # destroyed by the rule's own effect: the right one for left-to-right
    # application, the left one for right-to-left, both for simultaneous.
    if mode is RuleMode.LR_ITERATIVE:
        return [rule.right_env]
    if mode is RuleMode.RL_ITERATIVE:
        return [rule.left_env]
    return [rule.left_env, rule.right_env]


def is_self_opaquing(rule: PhonologicalRule, mode: RuleMode | None = None) -> bool:
    """Can the rule destroy its own environment material?

    True for a feature-changing rule when some bundle term of the relevant
    environment(s) unifies with the rule's input but not with its structural
    change, and for a deletion rule when some relevant term unifies with the
    input (a deleted segment could have been environment material).  Such
    rules must be unapplied repeatedly until vacuous.  Variable entries are
    treated as unconstrained for this test.
    """
    kind = classify(rule)
    if kind is RuleKind.EPENTHESIS:
        raise InvalidRuleError(f"rule {rule.name!r}: epenthesis rules have no such test")
    mode = mode or rule.mode
    structural_description = rule.input[0].without_variables()
    if kind is RuleKind.FEATURE_CHANGING:
        structural_change = overwrite(structural_description,
                                      rule.output[0].without_variables())
    for env in _relevant_envs(rule, mode):
        for term in _iter_bundle_terms(env.terms):
            material = term.bundle.without_variables()
            if unify(material, structural_description) is None:
                continue
            if kind is RuleKind.DELETION:
                return True
            if unify(material, structural_change) is None:
                return True
    return False


@dataclass(frozen=True)
class EnvMatch:
    """One way an environment consumed segments next to a match site.

    ``span`` is the (lo, hi) half-open index range the match covered,
    ``skipped`` the optional-segment indices that were passed over inside
    it, and ``binding`` the variable bindings accumulated on the way.
    """

    span: tuple[int, int]
    skipped: frozenset[int]
    binding: VariableBinding


def _match_sequence(terms, word, pos, step, binding, skipped, analysis):
    """Yield (pos, binding, skipped) states after consuming all terms.

    ``pos`` is the index of the next segment to consider, moving by
    ``step`` (+1 rightward, -1 leftward).  Terms arrive innermost first.
    """
    if not terms:
        yield pos, binding, skipped
        return
    head = terms[0]
    rest = terms[1:]
    if isinstance(head, BoundaryTerm):
        if analysis:
            yield from _match_sequence(rest, word, pos, step, binding, skipped, analysis)
        else:
            index = pos if step > 0 else pos + 1
            if index in word.boundaries:
                yield from _match_sequence(rest, word, pos, step, binding, skipped, analysis)
        return
    if isinstance(head, OptionalTerm):
        yield from _match_repeats(head, 0, rest, word, pos, step, binding, skipped, analysis)
        return
    # bundle term
    if not head.consumes_segment():
        if analysis:
            yield from _match_sequence(rest, word, pos, step, binding, skipped, analysis)
        else:
            extended = contains_pattern(head.diacritics, word.diacritics, binding)
            if extended is not None:
                yield from _match_sequence(rest, word, pos, step, extended, skipped, analysis)
        return
    while 0 <= pos < len(word.segments):
        segment = word.segments[pos]
        extended = (unify_pattern(head.bundle, segment.bundle, binding) if analysis
                    else contains_pattern(head.bundle, segment.bundle, binding))
        if extended is not None and not analysis and head.diacritics:
            extended = contains_pattern(head.diacritics, word.diacritics, extended)
        if extended is not None:
            yield from _match_sequence(rest, word, pos + step, step, extended,
                                       skipped, analysis)
        if analysis and segment.optional:
            skipped = skipped | {pos}
            pos += step
            continue
        return


def _match_repeats(opt, done, rest, word, pos, step, binding, skipped, analysis):
    if done >= opt.min_repeats:
        yield from _match_sequence(rest, word, pos, step, binding, skipped, analysis)
    if done < opt.max_repeats:
        for pos2, binding2, skipped2 in _match_sequence(
                opt.terms, word, pos, step, binding, skipped, analysis):
            yield from _match_repeats(opt, done + 1, rest, word, pos2, step,
                                      binding2, skipped2, analysis)


def _match_env(env, word, start, side, binding, analysis):
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {side!r}")
    step = -1 if side == LEFT else 1
    matches: list[EnvMatch] = []
    seen = set()
    for pos, bound, skipped in _match_sequence(
            env.terms, word, start, step, binding, frozenset(), analysis):
        if env.anchored:
            while 0 <= pos < len(word.segments) and word.segments[pos].optional:
                skipped = skipped | {pos}
                pos += step
            if 0 <= pos < len(word.segments):
                continue
        span = (start, pos) if step > 0 else (pos + 1, start + 1)
        if span[1] < span[0]:
            span = (span[0], span[0])
        match = EnvMatch(span, skipped, bound)
        key = (span, skipped, bound)
        if key not in seen:
            seen.add(key)
            matches.append(match)
    return tuple(matches)


def match_env_analysis(env: EnvironmentTemplate, word: Word, start: int, side: str,
                       binding: VariableBinding = EMPTY_BINDING) -> tuple[EnvMatch, ...]:
    """All ways the environment matches outward from ``start`` during analysis.

    ``start`` is the index of the first segment on the environment's side
    (target index - 1 for the left side, + 1 for the right side); it may lie
    one step outside the word, in which case only non-consuming terms can
    succeed.  An empty tuple means no match.
    """
    return _match_env(env, word, start, side, binding, analysis=True)


def match_env_synthesis(env: EnvironmentTemplate, word: Word, start: int, side: str,
                        binding: VariableBinding = EMPTY_BINDING) -> tuple[EnvMatch, ...]:
    """Like match_env_analysis but with the strict synthesis relations."""
    return _match_env(env, word, start, side, binding, analysis=False)
