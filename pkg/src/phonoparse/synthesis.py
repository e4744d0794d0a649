"""Forward application of rules to a lexical word (the test phase).

Application checks the target segment first and only then its environments,
so a rule whose right environment fails never touches the target at all.
Each rule runs in exactly one pass: material a rule creates is never fed
back to the same rule.  Directional iterative modes scan the current word
(left to right or right to left); simultaneous mode first collects every
site satisfying the rule against the input word, then rewrites them all.

Variables bind in a fixed order, input bundle first, then left environment
innermost-out, then right environment innermost-out; the first binder wins
and later occurrences must agree.  During synthesis a variable matched
against an uninstantiated feature fails, since lexical words are expected
to specify every feature their rules care about.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .alphabet import Segment, Word
from .features import EMPTY_BINDING, VariableBinding, contains_pattern, overwrite, resolve
from .rules import (
    LEFT,
    RIGHT,
    PhonologicalRule,
    RuleKind,
    RuleMode,
    classify,
    match_env_synthesis,
)

Observer = Callable[[PhonologicalRule, Word, Word], None]


class EmptyWordError(ValueError):
    """A deletion rule removed every segment of the word."""


def _environment_binding(rule, word, left_start, right_start,
                         binding) -> VariableBinding | None:
    for left in match_env_synthesis(rule.left_env, word, left_start, LEFT, binding):
        rights = match_env_synthesis(rule.right_env, word, right_start, RIGHT, left.binding)
        if rights:
            return rights[0].binding
    return None


def _site_binding(rule, word, index) -> VariableBinding | None:
    """Binding for a feature-changing or deletion site, or None if no match."""
    binding = contains_pattern(rule.input[0], word.segments[index].bundle, EMPTY_BINDING)
    if binding is None:
        return None
    return _environment_binding(rule, word, index - 1, index + 1, binding)


def apply_feature_changing(rule: PhonologicalRule, word: Word) -> Word:
    """Overwrite the rule's output features on every segment satisfying it."""
    if classify(rule) is not RuleKind.FEATURE_CHANGING:
        raise ValueError(f"rule {rule.name!r} is not feature-changing")
    output = rule.output[0]

    def rewritten(segment, binding):
        return Segment(overwrite(segment.bundle, output, binding), segment.optional)

    if rule.mode is RuleMode.SIMULTANEOUS:
        sites = [(i, b) for i in range(len(word))
                 if (b := _site_binding(rule, word, i)) is not None]
        if not sites:
            return word
        segments = list(word.segments)
        for i, binding in sites:
            segments[i] = rewritten(segments[i], binding)
        return word.with_segments(segments)

    order = range(len(word)) if rule.mode is RuleMode.LR_ITERATIVE \
        else range(len(word) - 1, -1, -1)
    current = word
    for i in order:
        binding = _site_binding(rule, current, i)
        if binding is None:
            continue
        segments = list(current.segments)
        segments[i] = rewritten(segments[i], binding)
        current = current.with_segments(segments)
    return current


def _insertion_sites(rule, word):
    sites = []
    for position in range(len(word) + 1):
        binding = _environment_binding(rule, word, position - 1, position, EMPTY_BINDING)
        if binding is not None:
            sites.append((position, binding))
    return sites


def apply_epenthesis(rule: PhonologicalRule, word: Word) -> Word:
    """Insert the output segment at every position the environments admit.

    Sites are judged against the input word for every mode, honouring the
    single-pass rule; insertions are applied right to left so positions stay
    valid.  Boundaries at an insertion point end up after the new segment.
    """
    if classify(rule) is not RuleKind.EPENTHESIS:
        raise ValueError(f"rule {rule.name!r} is not an epenthesis rule")
    sites = _insertion_sites(rule, word)
    if not sites:
        return word
    segments = list(word.segments)
    boundaries = set(word.boundaries)
    for position, binding in reversed(sites):
        segments.insert(position, Segment(resolve(rule.output[0], binding), optional=False))
        boundaries = {b + 1 if b >= position else b for b in boundaries}
    return word.with_segments(segments, boundaries)


def _delete_at(segments, boundaries, index):
    del segments[index]
    return {b if b <= index else b - 1
            for b in boundaries
            if 1 <= (b if b <= index else b - 1) <= len(segments) - 1}


def apply_deletion(rule: PhonologicalRule, word: Word) -> Word:
    """Remove every segment that satisfies the rule."""
    if classify(rule) is not RuleKind.DELETION:
        raise ValueError(f"rule {rule.name!r} is not a deletion rule")
    if rule.mode is RuleMode.SIMULTANEOUS:
        doomed = [i for i in range(len(word)) if _site_binding(rule, word, i) is not None]
        if not doomed:
            return word
        if len(doomed) == len(word):
            raise EmptyWordError(f"rule {rule.name!r} deleted the whole word")
        segments = list(word.segments)
        boundaries = set(word.boundaries)
        for i in reversed(doomed):
            boundaries = _delete_at(segments, boundaries, i)
        return word.with_segments(segments, boundaries)

    current = word
    i = 0 if rule.mode is RuleMode.LR_ITERATIVE else len(word) - 1
    step = 1 if rule.mode is RuleMode.LR_ITERATIVE else -1
    while 0 <= i < len(current):
        if _site_binding(rule, current, i) is not None:
            if len(current) == 1:
                raise EmptyWordError(f"rule {rule.name!r} deleted the whole word")
            segments = list(current.segments)
            boundaries = _delete_at(segments, set(current.boundaries), i)
            current = current.with_segments(segments, boundaries)
            if step > 0:
                continue  # the next candidate slid into this index
        i += step
    return current


def apply(rule: PhonologicalRule, word: Word) -> Word:
    kind = classify(rule)
    if kind is RuleKind.FEATURE_CHANGING:
        return apply_feature_changing(rule, word)
    if kind is RuleKind.EPENTHESIS:
        return apply_epenthesis(rule, word)
    return apply_deletion(rule, word)


def apply_all(rules: Iterable[PhonologicalRule], word: Word,
              observer: Observer | None = None) -> Word:
    """Apply rules in synthesis order, each to the previous rule's output."""
    for rule in rules:
        before = word
        word = apply(rule, word)
        if observer is not None:
            observer(rule, before, word)
    return word
