"""Rule classification, analysis targets, self-opaquing, environment matching."""

import pytest
from hypothesis import given, strategies as st

from phonoparse.alphabet import Segment, Word, to_segments
from phonoparse.features import (
    EMPTY_BINDING,
    EMPTY_BUNDLE,
    FeatureBundle,
    VariableBinding,
    VariableRef,
    uninstantiate,
)
from phonoparse.rules import (
    BOUNDARY,
    BundleTerm,
    EnvironmentTemplate,
    InvalidRuleError,
    OptionalTerm,
    PhonologicalRule,
    RuleKind,
    RuleMode,
    analysis_target,
    classify,
    is_self_opaquing,
    match_env_analysis,
    match_env_synthesis,
)

from conftest import devoicing_rule, env, fb, spec, spirantization_rule


def seg(**features):
    return Segment(fb(**features))


def opt_seg(**features):
    return Segment(fb(**features), optional=True)


# ------------------------------------------------------------ classification

def test_classify_deletion():
    rule = PhonologicalRule("drop", (fb(voc="+", round="-"),), ())
    assert classify(rule) is RuleKind.DELETION


def test_classify_epenthesis():
    rule = PhonologicalRule("insert", (), (fb(voc="+"),))
    assert classify(rule) is RuleKind.EPENTHESIS


def test_classify_feature_changing():
    assert classify(devoicing_rule()) is RuleKind.FEATURE_CHANGING


def test_both_sides_empty_invalid():
    with pytest.raises(InvalidRuleError):
        PhonologicalRule("broken", (), ())


def test_multi_segment_sides_rejected():
    with pytest.raises(InvalidRuleError):
        PhonologicalRule("multi", (fb(voc="+"), fb(voc="-")), (fb(voc="+"),))
    with pytest.raises(InvalidRuleError):
        PhonologicalRule("multi", (fb(voc="+"),), (fb(voc="+"), fb(voc="-")))


def test_output_variable_must_be_bound_somewhere():
    out = (FeatureBundle(high=VariableRef("a")),)
    with pytest.raises(InvalidRuleError):
        PhonologicalRule("free_var", (fb(nas="+"),), out)
    # fine when the right environment mentions it
    environment = env(FeatureBundle(high=VariableRef("a"), cont="-"))
    PhonologicalRule("bound_var", (fb(nas="+"),), out, right_env=environment)


# ---------------------------------------------------------- analysis target

def test_analysis_target_union_when_disjoint():
    rule = PhonologicalRule("spirant", (fb(son="-"),), (fb(cont="+"),))
    assert analysis_target(rule) == fb(son="-", cont="+")


def test_analysis_target_output_wins_clash():
    rule = PhonologicalRule("voice", (fb(voiced="-"),), (fb(voiced="+"),))
    assert analysis_target(rule) == fb(voiced="+")


def test_analysis_target_devoicing_union():
    assert analysis_target(devoicing_rule()) == fb(cont="-", voiced="-")


def test_analysis_target_omits_variable_entries():
    rule = PhonologicalRule(
        "assimilate", (fb(nas="+"),), (FeatureBundle(high=VariableRef("a")),),
        right_env=env(FeatureBundle(cont="-", high=VariableRef("a"))))
    assert analysis_target(rule) == fb(nas="+")


# ------------------------------------------------------------ self-opaquing

def test_spirantization_is_self_opaquing():
    assert is_self_opaquing(spirantization_rule())


def test_devoicing_is_not_self_opaquing():
    assert not is_self_opaquing(devoicing_rule())


def test_consonant_cluster_deletion_is_self_opaquing():
    C = fb(cons="+")
    rule = PhonologicalRule("cluster", (C,), (), left_env=env(C), right_env=env(C),
                            mode=RuleMode.SIMULTANEOUS)
    assert is_self_opaquing(rule)


def test_only_the_relevant_environment_counts():
    # the destroyable material sits in the left environment only
    rule_lr = PhonologicalRule("left_opaque", (fb(son="-"),), (fb(cont="+"),),
                               left_env=env(fb(cont="-")), mode=RuleMode.LR_ITERATIVE)
    assert not is_self_opaquing(rule_lr)
    assert is_self_opaquing(rule_lr, RuleMode.RL_ITERATIVE)
    assert is_self_opaquing(rule_lr, RuleMode.SIMULTANEOUS)


def test_self_opaquing_looks_inside_optional_terms():
    inner = OptionalTerm((BundleTerm(fb(cont="-")),), 0, 2)
    rule = PhonologicalRule("nested", (fb(son="-"),), (fb(cont="+"),),
                            right_env=EnvironmentTemplate((inner,)))
    assert is_self_opaquing(rule)


def test_self_opaquing_rejects_epenthesis():
    rule = PhonologicalRule("insert", (), (fb(voc="+"),))
    with pytest.raises(InvalidRuleError):
        is_self_opaquing(rule)


# --------------------------------------------------- analysis-side matching

def word(*segments, boundaries=(), known=True):
    return Word(tuple(segments), frozenset(boundaries), boundaries_known=known)


def test_vowel_deletion_left_env_in_virtual_word(jp_grammar, jp_alphabet):
    vowel_deletion = jp_grammar.rules_forward()[0]
    virtual = to_segments("neta", jp_alphabet).with_unknown_boundaries()
    # insertion point after e (position 2): vowel to the left, boundary ignored
    assert match_env_analysis(vowel_deletion.left_env, virtual, 1, "left")
    # insertion point after n (position 1): n is not a vowel
    assert not match_env_analysis(vowel_deletion.left_env, virtual, 0, "left")


def test_empty_unanchored_env_matches_once_anywhere():
    template = EnvironmentTemplate()
    w = word(seg(voc="+"), seg(voc="-"))
    for start in (-1, 0, 1, 2):
        for side in ("left", "right"):
            matches = match_env_analysis(template, w, start, side)
            assert len(matches) == 1
            assert matches[0].span[0] == matches[0].span[1]


def test_boundary_term_ignored_during_analysis():
    template = EnvironmentTemplate((BOUNDARY, BundleTerm(fb(voc="+"))))
    w = word(seg(voc="+"), seg(voc="-"), known=False)
    assert match_env_analysis(template, w, 0, "left")


def test_optional_repetition_bounds():
    CV = OptionalTerm((BundleTerm(fb(cons="+")), BundleTerm(fb(voc="+"))), 1, 2)
    template = EnvironmentTemplate((CV,), anchored=True)
    cv = [seg(cons="+"), seg(voc="+")]
    assert match_env_analysis(template, word(*cv), 0, "right")          # one repeat
    assert match_env_analysis(template, word(*cv, *cv), 0, "right")     # two repeats
    assert not match_env_analysis(template, word(*cv, *cv, *cv), 0, "right")
    assert not match_env_analysis(template, word(seg(cons="+")), 0, "right")


def test_optional_zero_minimum_always_admits_zero_repeats():
    opt = OptionalTerm((BundleTerm(fb(voc="+")),), 0, 3)
    template = EnvironmentTemplate((opt,))
    w = word(seg(voc="-"))
    matches = match_env_analysis(template, w, 0, "right")
    assert any(m.span[0] == m.span[1] for m in matches)


def test_optional_segments_may_be_skipped_or_consumed():
    template = EnvironmentTemplate((BundleTerm(fb(voc="+")),))
    # optional segment itself matches, and so does the segment behind it
    w = word(opt_seg(voc="+"), seg(voc="+"), seg(cons="+"))
    matches = match_env_analysis(template, w, 0, "right")
    spans = {m.span for m in matches}
    assert (0, 1) in spans              # consumed the optional segment
    assert (0, 2) in spans              # skipped it, consumed the next
    skipped = {m.skipped for m in matches}
    assert frozenset({0}) in skipped


def test_skipping_only_over_optional_segments():
    template = EnvironmentTemplate((BundleTerm(fb(voc="+")),))
    w = word(seg(voc="-"), seg(voc="+"))
    assert not match_env_analysis(template, w, 0, "right")


def test_anchored_empty_env_only_at_edge():
    template = EnvironmentTemplate(anchored=True)
    w = word(seg(voc="+"), seg(voc="-"))
    assert match_env_analysis(template, w, -1, "left")
    assert not match_env_analysis(template, w, 0, "left")
    assert match_env_analysis(template, w, 2, "right")
    assert not match_env_analysis(template, w, 1, "right")


def test_anchored_env_may_skip_trailing_optional_segment():
    template = EnvironmentTemplate((BundleTerm(fb(voc="+")),), anchored=True)
    w = word(seg(voc="+"), opt_seg(cons="+"))
    # rightward from 0: consume the vowel, pass over the trailing optional
    assert match_env_analysis(template, w, 0, "right")
    w2 = word(seg(voc="+"), seg(cons="+"))
    assert not match_env_analysis(template, w2, 0, "right")


def test_variable_bindings_flow_through_matches():
    template = EnvironmentTemplate((BundleTerm(FeatureBundle(high=VariableRef("a"))),))
    w = word(seg(high="+"))
    matches = match_env_analysis(template, w, 0, "right")
    assert matches[0].binding == VariableBinding({"a": "+"})
    assert not match_env_analysis(template, w, 0, "right", VariableBinding({"a": "-"}))


# -------------------------------------------------- synthesis-side matching

def test_boundary_required_during_synthesis(jp_grammar, jp_alphabet):
    vowel_deletion = jp_grammar.rules_forward()[0]
    w = to_segments("ne+itai", jp_alphabet)
    # at the i after the boundary the left environment matches
    assert match_env_synthesis(vowel_deletion.left_env, w, 1, "left")
    # at the final i (after a) there is no boundary
    assert not match_env_synthesis(vowel_deletion.left_env, w, 4, "left")


def test_synthesis_requires_containment_not_unification():
    template = EnvironmentTemplate((BundleTerm(fb(voiced="-")),))
    w = word(seg(cont="-"))  # voicing uninstantiated
    assert match_env_analysis(template, w, 0, "right")
    assert not match_env_synthesis(template, w, 0, "right")


def test_synthesis_variable_fails_on_uninstantiated_feature():
    template = EnvironmentTemplate((BundleTerm(FeatureBundle(high=VariableRef("a"))),))
    w = word(seg(cont="-"))
    assert not match_env_synthesis(template, w, 0, "right")


def test_diacritic_entries_ignored_in_analysis_checked_in_synthesis():
    term = BundleTerm(fb(voc="+"), diacritics=fb(latinate="+"))
    template = EnvironmentTemplate((term,))
    plain = word(seg(voc="+"))
    assert match_env_analysis(template, plain, 0, "right")
    assert not match_env_synthesis(template, plain, 0, "right")
    marked = Word((seg(voc="+"),), diacritics=fb(latinate="+"))
    assert match_env_synthesis(template, marked, 0, "right")


def test_diacritic_only_term_consumes_no_segment():
    term = BundleTerm(EMPTY_BUNDLE, diacritics=fb(latinate="+"))
    template = EnvironmentTemplate((term, BundleTerm(fb(voc="+"))))
    marked = Word((seg(voc="+"),), diacritics=fb(latinate="+"))
    matches = match_env_synthesis(template, marked, 0, "right")
    assert matches and matches[0].span == (0, 1)


# ------------------------------------------------------ relating the modes

@st.composite
def small_words(draw):
    n = draw(st.integers(1, 4))
    segments = tuple(
        Segment(fb(voc=draw(st.sampled_from("+-")), high=draw(st.sampled_from("+-"))))
        for _ in range(n))
    boundaries = frozenset(
        b for b in range(1, n) if draw(st.booleans()))
    return Word(segments, boundaries, boundaries_known=True)


@st.composite
def small_templates(draw):
    terms = []
    for _ in range(draw(st.integers(0, 2))):
        if draw(st.booleans()):
            terms.append(BOUNDARY)
        else:
            terms.append(BundleTerm(fb(voc=draw(st.sampled_from("+-")))))
    return EnvironmentTemplate(tuple(terms), anchored=draw(st.booleans()))


@given(small_words(), small_templates(), st.integers(-1, 4),
       st.sampled_from(("left", "right")))
def test_analysis_match_generalizes_synthesis_match(w, template, start, side):
    if match_env_synthesis(template, w, start, side):
        assert match_env_analysis(template, w, start, side)


@given(small_words(), small_templates(), st.integers(-1, 4),
       st.sampled_from(("left", "right")), st.sets(st.sampled_from(("voc", "high"))))
def test_analysis_match_survives_uninstantiation(w, template, start, side, names):
    if not match_env_analysis(template, w, start, side):
        return
    stripped = Word(tuple(Segment(uninstantiate(s.bundle, names), s.optional)
                          for s in w.segments),
                    w.boundaries, w.boundaries_known)
    assert match_env_analysis(template, stripped, start, side)
