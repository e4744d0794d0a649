"""Unapplication of rules to a surface word (the generation phase).

Each rule is undone in a way that encodes the resulting ambiguity in the
word itself rather than forking the search:

* a feature-changing rule uninstantiates, in every segment it could have
  produced, the features its output sets;
* an epenthesis rule marks every segment it could have inserted as
  [+optional];
* a deletion rule inserts a fresh [+optional] segment carrying the rule's
  input features at every site the environments admit, simultaneously, for
  at most a configured number of passes (unbounded re-unapplication of a
  deletion rule to its own output would never terminate).

Scan direction is the reverse of the application direction: a left-to-right
iterative rule is unapplied right to left and vice versa.  A simultaneous
rule is unapplied by a left-to-right iterative scan.  When a rule can
destroy its own environment material (see is_self_opaquing) one scan may
not reach everything, so the scan repeats until it changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .alphabet import Segment, Word
from .features import EMPTY_BINDING, resolve, uninstantiate, unify_pattern
from .rules import (
    LEFT,
    RIGHT,
    PhonologicalRule,
    RuleKind,
    RuleMode,
    analysis_target_pattern,
    classify,
    is_self_opaquing,
    match_env_analysis,
)

Observer = Callable[[PhonologicalRule, Word, Word], None]


class PassBoundExceededError(RuntimeError):
    """Repeated unapplication failed to settle within the safety bound.

    Unapplication only removes information, so this cannot fire for a
    well-formed grammar; it guards against a mis-specified one.
    """


@dataclass(frozen=True)
class AnalysisConfig:
    """Caps on the open-ended parts of unapplication.

    ``max_deletion_unapplications`` is the N of N-capped undeletion.
    ``max_self_opaquing_passes`` bounds repeated scans for self-opaquing
    feature-changing rules; None means the word's instantiated-feature
    count, which the termination argument makes sufficient.
    """

    max_deletion_unapplications: int = 1
    max_self_opaquing_passes: int | None = None

    def __post_init__(self) -> None:
        if self.max_deletion_unapplications < 1:
            raise ValueError("max_deletion_unapplications must be >= 1")
        if self.max_self_opaquing_passes is not None and self.max_self_opaquing_passes < 1:
            raise ValueError("max_self_opaquing_passes must be >= 1")


DEFAULT_CONFIG = AnalysisConfig()


def _environments_admit(rule, word, left_start, right_start, binding):
    for left in match_env_analysis(rule.left_env, word, left_start, LEFT, binding):
        if match_env_analysis(rule.right_env, word, right_start, RIGHT, left.binding):
            return True
    return False


def _scan_order(mode: RuleMode, length: int) -> range:
    # reverse of the application direction; simultaneous unapplies left to right
    if mode is RuleMode.LR_ITERATIVE:
        return range(length - 1, -1, -1)
    return range(length)


def _one_feature_changing_pass(rule, word, target_pattern, output_names):
    current = word
    for i in _scan_order(rule.mode, len(word)):
        segment = current.segments[i]
        binding = unify_pattern(target_pattern, segment.bundle, EMPTY_BINDING)
        if binding is None:
            continue
        if not _environments_admit(rule, current, i - 1, i + 1, binding):
            continue
        stripped = uninstantiate(segment.bundle, output_names)
        if stripped != segment.bundle:
            segments = list(current.segments)
            segments[i] = Segment(stripped, segment.optional)
            current = current.with_segments(segments)
    return current


def _strip_segments(word, members, output_names):
    segments = list(word.segments)
    for i in members:
        segments[i] = Segment(uninstantiate(segments[i].bundle, output_names),
                              segments[i].optional)
    return word.with_segments(segments)


def _mutual_assumption_pass(rule, word, target_pattern, output_names):
    """Open cycles a directional scan cannot enter.

    A simultaneous application may destroy the environments of every site
    involved (each rewritten segment was environment material for another),
    leaving no segment whose environment still matches.  Assume every
    target-unifiable segment was rewritten, then discard the ones whose
    environments fail even under that assumption, until the set is stable;
    the survivors are uninstantiated together.  Runs only after the
    iterative scans have gone vacuous, so it never alters their behavior.
    """
    members = {i for i in range(len(word))
               if unify_pattern(target_pattern, word.segments[i].bundle,
                                EMPTY_BINDING) is not None}
    while members:
        hypothetical = _strip_segments(word, members, output_names)
        kept = set()
        for i in members:
            binding = unify_pattern(target_pattern, word.segments[i].bundle,
                                    EMPTY_BINDING)
            if _environments_admit(rule, hypothetical, i - 1, i + 1, binding):
                kept.add(i)
        if kept == members:
            break
        members = kept
    if not members:
        return word
    return _strip_segments(word, members, output_names)


def _rule_has_variables(rule):
    bundles = list(rule.input) + list(rule.output)
    if any(b.has_variables() for b in bundles):
        return True
    from .rules import _iter_bundle_terms
    for env in (rule.left_env, rule.right_env):
        for term in _iter_bundle_terms(env.terms):
            if term.bundle.has_variables() or term.diacritics.has_variables():
                return True
    return False


def iter_feature_changing_passes(rule: PhonologicalRule, word: Word,
                                 config: AnalysisConfig = DEFAULT_CONFIG) -> Iterator[Word]:
    """Yield the word after each unapplication scan of a feature-changing rule.

    Non-self-opaquing rules take exactly one scan.  Self-opaquing rules scan
    until a pass changes nothing; the final, vacuous pass is yielded too.
    """
    if classify(rule) is not RuleKind.FEATURE_CHANGING:
        raise ValueError(f"rule {rule.name!r} is not feature-changing")
    target_pattern = analysis_target_pattern(rule)
    output_names = frozenset(rule.output[0])
    repeat = is_self_opaquing(rule, rule.mode)
    recover_cycles = (repeat and rule.mode is RuleMode.SIMULTANEOUS
                      and not _rule_has_variables(rule))
    bound = config.max_self_opaquing_passes
    if bound is None:
        bound = max(1, word.instantiated_feature_count())
    changed_passes = 0
    while True:
        after = _one_feature_changing_pass(rule, word, target_pattern, output_names)
        if after == word and recover_cycles:
            after = _mutual_assumption_pass(rule, word, target_pattern, output_names)
        yield after
        if after == word or not repeat:
            return
        changed_passes += 1
        if changed_passes > bound:
            raise PassBoundExceededError(
                f"rule {rule.name!r} still changing after {bound} unapplication passes")
        word = after


def unapply_feature_changing(rule: PhonologicalRule, word: Word,
                             config: AnalysisConfig = DEFAULT_CONFIG) -> Word:
    """Uninstantiate the output features of every segment the rule reaches."""
    for word in iter_feature_changing_passes(rule, word, config):
        pass
    return word


def unapply_epenthesis(rule: PhonologicalRule, word: Word) -> Word:
    """Mark every segment the rule could have inserted as [+optional].

    One simultaneous pass: candidacy is judged against the input word, so
    fresh markings cannot feed further markings.
    """
    if classify(rule) is not RuleKind.EPENTHESIS:
        raise ValueError(f"rule {rule.name!r} is not an epenthesis rule")
    pattern = rule.output[0]
    marked = []
    hit = False
    for i, segment in enumerate(word.segments):
        binding = unify_pattern(pattern, segment.bundle, EMPTY_BINDING)
        if binding is not None and _environments_admit(rule, word, i - 1, i + 1, binding):
            marked.append(Segment(segment.bundle, optional=True))
            hit = True
        else:
            marked.append(segment)
    return word.with_segments(marked) if hit else word


def _deletion_sites(rule, word):
    sites = []
    for position in range(len(word) + 1):
        for left in match_env_analysis(rule.left_env, word, position - 1, LEFT):
            rights = match_env_analysis(rule.right_env, word, position, RIGHT, left.binding)
            if rights:
                sites.append((position, rights[0].binding))
                break
    return sites


def unapply_deletion(rule: PhonologicalRule, word: Word,
                     config: AnalysisConfig = DEFAULT_CONFIG) -> Word:
    """Insert [+optional] copies of the deleted segment wherever it fits.

    Each pass computes every admissible insertion point against the pass's
    input word and inserts at all of them at once (at most one insertion per
    inter-segment position).  Passes stop after
    config.max_deletion_unapplications, or earlier once a pass inserts
    nothing.
    """
    if classify(rule) is not RuleKind.DELETION:
        raise ValueError(f"rule {rule.name!r} is not a deletion rule")
    for _ in range(config.max_deletion_unapplications):
        sites = _deletion_sites(rule, word)
        if not sites:
            break
        segments = list(word.segments)
        boundaries = set(word.boundaries)
        for position, binding in reversed(sites):
            restored = resolve(rule.input[0], binding, drop_unbound=True)
            segments.insert(position, Segment(restored, optional=True))
            boundaries = {b + 1 if b >= position else b for b in boundaries}
        word = word.with_segments(segments, boundaries)
    return word


def unapply(rule: PhonologicalRule, word: Word,
            config: AnalysisConfig = DEFAULT_CONFIG) -> Word:
    kind = classify(rule)
    if kind is RuleKind.FEATURE_CHANGING:
        return unapply_feature_changing(rule, word, config)
    if kind is RuleKind.EPENTHESIS:
        return unapply_epenthesis(rule, word)
    return unapply_deletion(rule, word, config)


def unapply_all(rules: Iterable[PhonologicalRule], word: Word,
                config: AnalysisConfig = DEFAULT_CONFIG,
                observer: Observer | None = None) -> Word:
    """Unapply a synthesis-ordered rule list: reverse it, then fold unapply."""
    for rule in reversed(list(rules)):
        before = word
        word = unapply(rule, word, config)
        if observer is not None:
            observer(rule, before, word)
    return word
