"""Feature bundle algebra: examples plus the algebraic laws."""

import pytest
from hypothesis import given, strategies as st

from phonoparse.features import (
    EMPTY_BINDING,
    EMPTY_BUNDLE,
    FeatureBundle,
    FeatureSystem,
    UnboundVariableError,
    VariableBinding,
    VariableRef,
    binary_feature_system,
    contains,
    contains_pattern,
    overwrite,
    resolve,
    uninstantiate,
    unify,
    unify_pattern,
)

from conftest import fb, stop_alphabet


NAMES = ("voc", "cons", "high", "back")


def bundles(names=NAMES, values="+-"):
    return st.dictionaries(st.sampled_from(names), st.sampled_from(values),
                           max_size=len(names)).map(FeatureBundle)


# ---------------------------------------------------------------- unify

def test_unify_disjoint_names_merge():
    assert unify(fb(voc="+"), fb(round="-")) == fb(voc="+", round="-")


def test_unify_direct_clash_is_incompatible():
    assert unify(fb(voiced="-"), fb(voiced="+")) is None


def test_unify_empty_bundle_is_identity():
    assert unify(EMPTY_BUNDLE, fb(cont="-", voiced="-")) == fb(cont="-", voiced="-")


def test_unify_rejects_variables():
    with pytest.raises(ValueError):
        unify(FeatureBundle(high=VariableRef("a")), fb(high="+"))


@given(bundles(), bundles())
def test_unify_commutative(a, b):
    assert unify(a, b) == unify(b, a)


@given(bundles())
def test_unify_idempotent(a):
    assert unify(a, a) == a


@given(bundles(), bundles(), bundles())
def test_unify_associative_where_defined(a, b, c):
    ab = unify(a, b)
    if ab is None or unify(ab, c) is None:
        return
    bc = unify(b, c)
    assert bc is not None
    assert unify(a, bc) == unify(ab, c)


# ------------------------------------------------------------- contains

def test_contains_subset():
    assert contains(fb(cons="+", voiced="-", cont="-"), fb(cont="-"))


def test_contains_missing_entry_fails():
    assert not contains(fb(cont="-"), fb(cont="-", voiced="-"))


def test_contains_empty_requirement():
    assert contains(fb(voc="+"), EMPTY_BUNDLE)
    assert contains(EMPTY_BUNDLE, EMPTY_BUNDLE)


@given(bundles(), bundles())
def test_contains_iff_unify_is_identity(a, b):
    assert contains(a, b) == (unify(a, b) == a)


# -------------------------------------------------------- uninstantiate

def test_uninstantiate_single_removal():
    assert uninstantiate(fb(cont="-", voiced="-"), {"voiced"}) == fb(cont="-")


def test_uninstantiate_empty_names_is_identity():
    a = fb(cont="-", voiced="-")
    assert uninstantiate(a, set()) == a


def test_uninstantiated_stop_covers_exactly_both_voicings():
    # independent check by enumerating the alphabet
    alphabet = stop_alphabet()
    t = next(s.bundle for s in alphabet.specs if s.grapheme == "t")
    opened = uninstantiate(t, {"voiced"})
    compatible = {s.grapheme for s in alphabet.specs
                  if unify(s.bundle, opened) is not None}
    assert compatible == {"t", "d"}


@given(bundles(), st.sets(st.sampled_from(NAMES)))
def test_uninstantiate_never_adds_entries(a, names):
    result = uninstantiate(a, names)
    assert set(result) <= set(a)
    assert all(result[n] == a[n] for n in result)


# ------------------------------------------------------------ overwrite

def test_overwrite_devoicing_output():
    assert overwrite(fb(voiced="+", cont="-"), fb(voiced="-")) == fb(voiced="-", cont="-")


def test_overwrite_empty_output_is_identity():
    a = fb(nasal="+")
    assert overwrite(a, EMPTY_BUNDLE) == a


def test_overwrite_variable_resolved_from_binding():
    out = FeatureBundle(high=VariableRef("a"))
    binding = VariableBinding({"a": "+"})
    assert overwrite(fb(nasal="+"), out, binding) == fb(nasal="+", high="+")


def test_overwrite_unbound_variable_raises():
    out = FeatureBundle(high=VariableRef("a"))
    with pytest.raises(UnboundVariableError):
        overwrite(fb(nasal="+"), out)


@given(bundles(), bundles())
def test_overwrite_result_contains_output(a, b):
    assert contains(overwrite(a, b), b)


@given(bundles(), bundles())
def test_overwrite_preserves_unnamed_features(a, b):
    result = overwrite(a, b)
    for name in a:
        if name not in b:
            assert result[name] == a[name]


# --------------------------------------------------------- unify_pattern

def test_unify_pattern_direct_bind():
    pattern = FeatureBundle(back=VariableRef("a"))
    assert unify_pattern(pattern, fb(back="+")) == VariableBinding({"a": "+"})


def test_unify_pattern_prior_binding_clash():
    pattern = FeatureBundle(back=VariableRef("a"))
    assert unify_pattern(pattern, fb(back="-"), VariableBinding({"a": "+"})) is None


def test_unify_pattern_shared_variable_forces_agreement():
    # brute force over the two-value binding space: no alpha works
    pattern = FeatureBundle(high=VariableRef("a"), back=VariableRef("a"))
    concrete = fb(high="+", back="-")
    for value in "+-":
        assert not (concrete["high"] == value and concrete["back"] == value)
    assert unify_pattern(pattern, concrete) is None
    # and with agreeing values the binding comes out
    assert unify_pattern(pattern, fb(high="-", back="-")) == VariableBinding({"a": "-"})


def test_unify_pattern_uninstantiated_feature_is_assumed():
    pattern = FeatureBundle(back=VariableRef("a"), high="+")
    binding = unify_pattern(pattern, fb(high="+"))
    assert binding == EMPTY_BINDING  # variable bound nothing, match stands


@given(bundles(), st.one_of(st.none(), st.sampled_from("+-")).map(
        lambda v: VariableBinding({} if v is None else {"a": v})))
def test_unify_pattern_empty_pattern_returns_binding(concrete, binding):
    assert unify_pattern(EMPTY_BUNDLE, concrete, binding) == binding


@given(bundles(), bundles())
def test_unify_pattern_on_concrete_agrees_with_unify(pattern, concrete):
    ok = unify_pattern(pattern, concrete) is not None
    assert ok == (unify(pattern, concrete) is not None)


# ------------------------------------------------------ contains_pattern

def test_contains_pattern_requires_instantiation():
    pattern = FeatureBundle(back=VariableRef("a"))
    assert contains_pattern(pattern, fb(high="+")) is None


def test_contains_pattern_binds_and_agrees():
    pattern = FeatureBundle(back=VariableRef("a"), high=VariableRef("a"))
    assert contains_pattern(pattern, fb(back="+", high="+")) == VariableBinding({"a": "+"})
    assert contains_pattern(pattern, fb(back="+", high="-")) is None


@given(bundles(), bundles())
def test_contains_pattern_on_concrete_agrees_with_contains(pattern, concrete):
    ok = contains_pattern(pattern, concrete) is not None
    assert ok == contains(concrete, pattern)


# ---------------------------------------------------------------- resolve

def test_resolve_drop_unbound_omits_the_feature():
    pattern = FeatureBundle(high=VariableRef("a"), nasal="+")
    assert resolve(pattern, drop_unbound=True) == fb(nasal="+")


# ----------------------------------------------------------- FeatureSystem

def test_feature_system_always_carries_optional():
    system = binary_feature_system("voc")
    assert system.features["optional"] == frozenset("+-")


def test_feature_system_rejects_empty_value_set():
    with pytest.raises(ValueError):
        FeatureSystem({"voc": frozenset()})


def test_feature_system_rejects_nonbinary_optional():
    with pytest.raises(ValueError):
        FeatureSystem({"optional": frozenset({"yes", "no"})})


def test_feature_system_diacritics_must_be_declared():
    with pytest.raises(ValueError):
        FeatureSystem({"voc": frozenset("+-")}, frozenset({"latinate"}))


def test_validate_bundle_checks_names_values_and_variables():
    system = binary_feature_system("voc", "high")
    system.validate_bundle(fb(voc="+"))
    with pytest.raises(ValueError):
        system.validate_bundle(fb(weird="+"))
    with pytest.raises(ValueError):
        system.validate_bundle(FeatureBundle(voc="0"))
    with pytest.raises(ValueError):
        system.validate_bundle(FeatureBundle(voc=VariableRef("a")))
    system.validate_bundle(FeatureBundle(voc=VariableRef("a")), allow_variables=True)
    with pytest.raises(ValueError):
        system.validate_bundle(FeatureBundle(optional="+"))


def test_split_diacritics():
    system = FeatureSystem({"voc": frozenset("+-"), "latinate": frozenset("+-")},
                           frozenset({"latinate"}))
    seg, dia = system.split_diacritics(fb(voc="+", latinate="-"))
    assert seg == fb(voc="+")
    assert dia == fb(latinate="-")
    assert system.phonetic_features() == frozenset({"voc"})
