"""Morphophonological parsing with linearly ordered rewrite rules.

Surface forms are parsed by unapplying the rules in reverse order, encoding
each rule's ambiguity in the form itself (uninstantiated features, optional
segments), matching the resulting virtual word against the lexicon by
unification, and then testing every candidate by deriving it forward again:
whatever fails to regenerate the input is thrown out.
"""

from .alphabet import (
    Alphabet,
    Segment,
    SegmentSpecification,
    UnrenderableError,
    UntranslatableError,
    Word,
    grapheme_candidates,
    render,
    to_segments,
)
from .analysis import (
    AnalysisConfig,
    PassBoundExceededError,
    iter_feature_changing_passes,
    unapply,
    unapply_all,
    unapply_deletion,
    unapply_epenthesis,
    unapply_feature_changing,
)
from .features import (
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
from .lexicon import LexicalEntry, Lexicon, LookupMatch, lookup
from .pipeline import (
    Grammar,
    Stratum,
    WordAnalysis,
    WordTooLongError,
    brute_force_parse,
    compare,
    parse,
    parse_with_trace,
    synthesize,
)
from .rules import (
    BOUNDARY,
    BoundaryTerm,
    BundleTerm,
    EnvironmentTemplate,
    EnvMatch,
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
from .synthesis import (
    EmptyWordError,
    apply,
    apply_all,
    apply_deletion,
    apply_epenthesis,
    apply_feature_changing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
