"""Grammar, lexicon, and command file handling.

A command stream is a sequence of top-level forms, executed in order:

    (load_feature_system <feat_sys features ((voc (+ -)) ...)
                         diacritics (latinate ...)>)
    (load_alphabet <alphabet role both boundary_markers ("+")
                    specs ((n (- voc + cons ...)) ...)>)
    (load_morpher_rule <prule rname NAME
                        p_lhs <p_lhs pseq (BUNDLE ...)>
                        p_rhs <p_rhs pseq (BUNDLE ...)>
                        left_environ <ptemp pseq (TERM ...) anchored T>
                        right_environ <ptemp pseq (TERM ...)>
                        mode lr_iterative|rl_iterative|simultaneous>)
    (load_lex_entry <lex_entry shape "ne+ta" gloss "(sleep)+PAST">)
    (set_stratum NAME)
    (set_max_undeletions N)
    (trace_lexical_lookup T)
    (trace_morpher_rule (T T NAME))
    (morph_and_lookup_word "...")
    (generate_word "...")

A BUNDLE is a flat list of value/name pairs, ``(+ voc - round)``; a fused
spelling like ``-round`` is accepted, as is an en dash for the minus value.
A value written ``%x`` is the variable x.  Inside an environment pseq a
quoted string is a morpheme-boundary requirement and
``(opt (TERM ...) MIN MAX)`` is an optional sub-sequence.  Environments are
written outside-in, as rules are usually displayed; the loader flips the
left environment into the innermost-first order the matcher uses.
"""

from __future__ import annotations

import io
import json
from typing import Callable

from .alphabet import Alphabet, SegmentSpecification
from .analysis import AnalysisConfig
from .features import (
    EMPTY_BUNDLE,
    FeatureBundle,
    FeatureSystem,
    VariableRef,
)
from .lexicon import LexicalEntry, Lexicon
from .pipeline import Grammar, Stratum, parse_with_trace, synthesize
from .rules import (
    BOUNDARY,
    BoundaryTerm,
    BundleTerm,
    EnvironmentTemplate,
    EnvTerm,
    InvalidRuleError,
    OptionalTerm,
    PhonologicalRule,
    RuleMode,
)
from .sexpr import QuotedString, SexprError, Struct, Symbol, read_forms
from .trace import (
    TraceConfig,
    format_analyses,
    format_trace,
    leaf_views,
    structured_lines,
)


class CommandError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


_MINUS_SPELLINGS = {"–", "−", "-"}


def _normalize_value(token: str) -> str:
    return "-" if token in _MINUS_SPELLINGS else token


def _is_symbol(x: object) -> bool:
    return isinstance(x, Symbol)


def parse_bundle(tokens: list, system: FeatureSystem | None = None,
                 *, allow_variables: bool = False, context: str = "bundle") -> FeatureBundle:
    """Read a flat value/name pair list into a bundle."""
    entries: list[tuple[str, object]] = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not _is_symbol(token):
            raise CommandError(f"{context}: expected a value symbol, got {token!r}")
        text = str(token)
        value: object
        if text.startswith("%") and len(text) > 1:
            value = VariableRef(text[1:])
            i += 1
        elif _normalize_value(text) == "-" or text == "+":
            value = _normalize_value(text)
            i += 1
        elif len(text) > 1 and (text[0] == "+" or _normalize_value(text[0]) == "-"):
            # fused spelling such as -round
            value = _normalize_value(text[0])
            entries.append((text[1:], value))
            i += 1
            continue
        else:
            value = text
            i += 1
        if i >= len(tokens) or not _is_symbol(tokens[i]):
            raise CommandError(f"{context}: value {text!r} has no feature name")
        entries.append((str(tokens[i]), value))
        i += 1
    bundle = FeatureBundle(dict((n, v) for n, v in entries))
    if len(entries) != len(bundle):
        names = [n for n, _ in entries]
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise CommandError(f"{context}: duplicate feature names {dupes}")
    if system is not None:
        try:
            system.validate_bundle(bundle, allow_variables=allow_variables, context=context)
        except ValueError as error:
            raise CommandError(str(error)) from error
    return bundle


def _parse_env_term(element: object, system: FeatureSystem,
                    context: str) -> EnvTerm:
    if isinstance(element, QuotedString):
        return BOUNDARY
    if isinstance(element, list):
        if element and element[0] == Symbol("opt"):
            if len(element) != 4 or not isinstance(element[1], list) \
                    or not isinstance(element[2], int) or not isinstance(element[3], int):
                raise CommandError(f"{context}: opt takes (opt (terms) MIN MAX)")
            sub = tuple(_parse_env_term(e, system, context) for e in element[1])
            return OptionalTerm(sub, element[2], element[3])
        bundle = parse_bundle(element, system, allow_variables=True, context=context)
        segmental, diacritic = system.split_diacritics(bundle)
        return BundleTerm(segmental, diacritic)
    raise CommandError(f"{context}: bad environment term {element!r}")


def _parse_environment(struct: object, system: FeatureSystem, side: str,
                       rule_name: str) -> EnvironmentTemplate:
    if struct is None:
        return EnvironmentTemplate()
    if not isinstance(struct, Struct) or struct.head != "ptemp":
        raise CommandError(f"rule {rule_name!r}: {side} environment must be a <ptemp>")
    pseq = struct.get("pseq", [])
    if not isinstance(pseq, list):
        raise CommandError(f"rule {rule_name!r}: ptemp pseq must be a list")
    terms = [_parse_env_term(e, system, f"rule {rule_name!r} {side} environment")
             for e in pseq]
    if side == "left":
        terms.reverse()  # file order is outside-in; the matcher wants innermost first
    anchored = _parse_flag(struct.get("anchored", Symbol("F")))
    return EnvironmentTemplate(tuple(terms), anchored)


def _parse_flag(token: object) -> bool:
    if _is_symbol(token) and str(token).upper() in ("T", "TRUE"):
        return True
    if _is_symbol(token) and str(token).upper() in ("F", "NIL", "FALSE"):
        return False
    raise CommandError(f"expected T or F, got {token!r}")


def _parse_side(struct: object, head: str, system: FeatureSystem,
                rule_name: str) -> tuple[FeatureBundle, ...]:
    if struct is None:
        return ()
    if not isinstance(struct, Struct) or struct.head != head:
        raise CommandError(f"rule {rule_name!r}: expected <{head} pseq (...)>")
    pseq = struct.get("pseq", [])
    bundles = []
    for element in pseq:
        if not isinstance(element, list):
            raise CommandError(f"rule {rule_name!r}: {head} pseq holds bundles")
        bundles.append(parse_bundle(element, system, allow_variables=True,
                                    context=f"rule {rule_name!r} {head}"))
    return tuple(bundles)


def parse_rule_expr(struct: Struct, system: FeatureSystem) -> PhonologicalRule:
    """Turn a <prule ...> structure into a rule, validating it on the way."""
    if struct.head != "prule":
        raise CommandError(f"expected a <prule>, got <{struct.head}>")
    name = struct.get("rname")
    if name is None or not isinstance(name, (Symbol, QuotedString)):
        raise CommandError("<prule> needs an rname")
    name = str(name)
    input_side = _parse_side(struct.get("p_lhs"), "p_lhs", system, name)
    output_side = _parse_side(struct.get("p_rhs"), "p_rhs", system, name)
    for bundle in input_side + output_side:
        overlap = set(bundle) & system.diacritics
        if overlap:
            raise CommandError(f"rule {name!r}: diacritic features {sorted(overlap)} "
                               "are word-level and cannot appear in input or output")
    left = _parse_environment(struct.get("left_environ"), system, "left", name)
    right = _parse_environment(struct.get("right_environ"), system, "right", name)
    mode_token = struct.get("mode", Symbol("lr_iterative"))
    try:
        mode = RuleMode(str(mode_token))
    except ValueError:
        raise CommandError(f"rule {name!r}: unknown mode {mode_token!r}") from None
    try:
        return PhonologicalRule(name, input_side, output_side, left, right, mode)
    except InvalidRuleError as error:
        raise CommandError(str(error)) from error


def _format_value(value: object) -> str:
    if isinstance(value, VariableRef):
        return f"%{value.name}"
    return str(value)


def _format_bundle(bundle: FeatureBundle) -> str:
    return "(" + " ".join(f"{_format_value(v)} {n}" for n, v in bundle.items()) + ")"


def _format_term(term: EnvTerm) -> str:
    if isinstance(term, BoundaryTerm):
        return '"+"'
    if isinstance(term, OptionalTerm):
        inner = " ".join(_format_term(t) for t in term.terms)
        return f"(opt ({inner}) {term.min_repeats} {term.max_repeats})"
    merged = dict(term.bundle)
    merged.update(term.diacritics)
    return _format_bundle(FeatureBundle(merged))


def _format_environment(env: EnvironmentTemplate, side: str) -> str:
    terms = list(env.terms)
    if side == "left":
        terms.reverse()
    body = " ".join(_format_term(t) for t in terms)
    anchored = " anchored T" if env.anchored else ""
    return f"<ptemp pseq ({body}){anchored}>"


def print_rule_expr(rule: PhonologicalRule) -> str:
    """Inverse of parse_rule_expr, up to default-field omission."""
    parts = [f"<prule rname {rule.name}"]
    parts.append(" p_lhs <p_lhs pseq ("
                 + " ".join(_format_bundle(b) for b in rule.input) + ")>")
    parts.append(" p_rhs <p_rhs pseq ("
                 + " ".join(_format_bundle(b) for b in rule.output) + ")>")
    if rule.left_env.terms or rule.left_env.anchored:
        parts.append(" left_environ " + _format_environment(rule.left_env, "left"))
    if rule.right_env.terms or rule.right_env.anchored:
        parts.append(" right_environ " + _format_environment(rule.right_env, "right"))
    if rule.mode is not RuleMode.LR_ITERATIVE:
        parts.append(f" mode {rule.mode.value}")
    return "\n".join(parts) + ">"


def parse_feature_system_expr(struct: Struct) -> FeatureSystem:
    if struct.head != "feat_sys":
        raise CommandError(f"expected a <feat_sys>, got <{struct.head}>")
    features = {}
    for element in struct.require("features"):
        if not (isinstance(element, list) and len(element) == 2
                and _is_symbol(element[0]) and isinstance(element[1], list)):
            raise CommandError(f"feat_sys features: expected (name (values)), "
                               f"got {element!r}")
        values = frozenset(_normalize_value(str(v)) for v in element[1])
        features[str(element[0])] = values
    diacritics = frozenset(str(d) for d in struct.get("diacritics", []))
    try:
        return FeatureSystem(features, diacritics)
    except ValueError as error:
        raise CommandError(str(error)) from error


def parse_alphabet_expr(struct: Struct, system: FeatureSystem) -> Alphabet:
    if struct.head != "alphabet":
        raise CommandError(f"expected an <alphabet>, got <{struct.head}>")
    role = str(struct.get("role", Symbol("both")))
    if role not in ("surface", "lexical", "both"):
        raise CommandError(f"alphabet role must be surface, lexical or both, got {role!r}")
    markers = [str(m) for m in struct.get("boundary_markers", [QuotedString("+")])]
    specs = []
    for element in struct.require("specs"):
        if not (isinstance(element, list) and len(element) == 2
                and _is_symbol(element[0]) and isinstance(element[1], list)):
            raise CommandError(f"alphabet specs: expected (grapheme (bundle)), "
                               f"got {element!r}")
        grapheme = str(element[0])
        bundle = parse_bundle(element[1], system, context=f"spec {grapheme!r}")
        overlap = set(bundle) & system.diacritics
        if overlap:
            raise CommandError(f"spec {grapheme!r}: diacritic features {sorted(overlap)} "
                               "are word-level and cannot sit on a segment")
        specs.append(SegmentSpecification(grapheme, bundle))
    try:
        return Alphabet(specs, markers, role)
    except ValueError as error:
        raise CommandError(str(error)) from error


class CommandInterpreter:
    """Executes a command stream, accumulating grammar, lexicon, and traces.

    Loads mutate the grammar under construction; parse and generate commands
    run against a snapshot assembled on demand.
    """

    def __init__(self, out: io.TextIOBase | None = None,
                 emit: Callable[[str], None] | None = None):
        self._out = out
        self._emit = emit
        self.feature_system: FeatureSystem | None = None
        self.surface_alphabet: Alphabet | None = None
        self.lexical_alphabet: Alphabet | None = None
        self.strata: dict[str, list[PhonologicalRule]] = {}
        self.current_stratum = "default"
        self.entries: list[LexicalEntry] = []
        self.trace_config = TraceConfig()
        self.max_undeletions = 1
        self.output_format = "text"

    def _print(self, text: str) -> None:
        if self._emit is not None:
            self._emit(text)
        elif self._out is not None:
            print(text, file=self._out)
        else:
            print(text)

    def run_stream(self, text: str) -> None:
        for form, line in read_forms(text):
            try:
                self.execute(form)
            except CommandError as error:
                if error.line is None:
                    raise CommandError(str(error), line) from error
                raise
            except SexprError:
                raise

    def run_file(self, path) -> None:
        with open(path, encoding="utf-8") as handle:
            self.run_stream(handle.read())

    def execute(self, form: object) -> None:
        if not isinstance(form, list) or not form or not _is_symbol(form[0]):
            raise CommandError(f"commands are lists starting with a name, got {form!r}")
        command = str(form[0])
        handler = getattr(self, f"_cmd_{command}", None)
        if handler is None:
            raise CommandError(f"unknown command {command!r}")
        handler(form[1:])

    # -- loading -----------------------------------------------------------

    def _require_system(self) -> FeatureSystem:
        if self.feature_system is None:
            raise CommandError("no feature system loaded yet")
        return self.feature_system

    def _cmd_load_feature_system(self, args):
        (struct,) = _arity(args, 1, "load_feature_system")
        if not isinstance(struct, Struct):
            raise CommandError("load_feature_system takes a <feat_sys>")
        self.feature_system = parse_feature_system_expr(struct)

    def _cmd_load_alphabet(self, args):
        (struct,) = _arity(args, 1, "load_alphabet")
        if not isinstance(struct, Struct):
            raise CommandError("load_alphabet takes an <alphabet>")
        alphabet = parse_alphabet_expr(struct, self._require_system())
        if alphabet.role in ("surface", "both"):
            self.surface_alphabet = alphabet
        if alphabet.role in ("lexical", "both"):
            self.lexical_alphabet = alphabet

    def _cmd_load_morpher_rule(self, args):
        (struct,) = _arity(args, 1, "load_morpher_rule")
        if not isinstance(struct, Struct):
            raise CommandError("load_morpher_rule takes a <prule>")
        rule = parse_rule_expr(struct, self._require_system())
        for rules in self.strata.values():
            if any(r.name == rule.name for r in rules):
                raise CommandError(f"duplicate rule name {rule.name!r}")
        self.strata.setdefault(self.current_stratum, []).append(rule)

    def _cmd_load_lex_entry(self, args):
        (struct,) = _arity(args, 1, "load_lex_entry")
        if not isinstance(struct, Struct) or struct.head != "lex_entry":
            raise CommandError("load_lex_entry takes a <lex_entry>")
        if self.lexical_alphabet is None:
            raise CommandError("no lexical alphabet loaded yet")
        shape = struct.require("shape")
        gloss = struct.get("gloss", QuotedString(""))
        diacritics = EMPTY_BUNDLE
        if "diacritics" in struct.fields:
            diacritics = parse_bundle(struct.fields["diacritics"],
                                      self._require_system(),
                                      context=f"entry {shape!r} diacritics")
        try:
            entry = LexicalEntry.from_shape(str(shape), str(gloss),
                                            self.lexical_alphabet, diacritics)
        except ValueError as error:
            raise CommandError(str(error)) from error
        self.entries.append(entry)

    def _cmd_set_stratum(self, args):
        (name,) = _arity(args, 1, "set_stratum")
        self.current_stratum = str(name)
        self.strata.setdefault(self.current_stratum, [])

    def _cmd_set_max_undeletions(self, args):
        (count,) = _arity(args, 1, "set_max_undeletions")
        if not isinstance(count, int) or count < 1:
            raise CommandError("set_max_undeletions takes a positive integer")
        self.max_undeletions = count

    # -- tracing -----------------------------------------------------------

    def _cmd_trace_lexical_lookup(self, args):
        (flag,) = _arity(args, 1, "trace_lexical_lookup")
        self.trace_config.lexical_lookup = _parse_flag(flag)

    def _cmd_trace_morpher_rule(self, args):
        (spec,) = _arity(args, 1, "trace_morpher_rule")
        if not isinstance(spec, list) or len(spec) != 3:
            raise CommandError("trace_morpher_rule takes (ANALYSIS SYNTHESIS rname)")
        self.trace_config.set_rule(str(spec[2]), _parse_flag(spec[0]),
                                   _parse_flag(spec[1]))

    # -- running -----------------------------------------------------------

    def grammar(self) -> Grammar:
        system = self._require_system()
        if self.surface_alphabet is None:
            raise CommandError("no surface alphabet loaded yet")
        if self.lexical_alphabet is None:
            raise CommandError("no lexical alphabet loaded yet")
        strata = tuple(Stratum(name, tuple(rules))
                       for name, rules in self.strata.items())
        if not strata:
            strata = (Stratum("default", ()),)
        return Grammar(system, self.surface_alphabet, self.lexical_alphabet, strata,
                       AnalysisConfig(max_deletion_unapplications=self.max_undeletions))

    def lexicon(self) -> Lexicon:
        return Lexicon(self.entries, self.lexical_alphabet)

    def _cmd_morph_and_lookup_word(self, args):
        (word,) = _arity(args, 1, "morph_and_lookup_word")
        _, root = parse_with_trace(str(word), self.grammar(), self.lexicon())
        views = leaf_views(root)
        if self.output_format == "structured":
            for line in structured_lines(root, self.trace_config, views):
                self._print(line)
            return
        text = format_trace(root, self.trace_config)
        if text:
            self._print(text)
        self._print(format_analyses(views))

    def _cmd_generate_word(self, args):
        (shape,) = _arity(args, 1, "generate_word")
        if self.lexical_alphabet is None:
            raise CommandError("no lexical alphabet loaded yet")
        entry = LexicalEntry.from_shape(str(shape), "", self.lexical_alphabet)
        surface = synthesize(entry, self.grammar())
        if self.output_format == "structured":
            self._print(json.dumps({"event": "word_generation", "shape": surface}))
        else:
            self._print(f'(generated_word "{surface}")')


def _arity(args, n, command):
    if len(args) != n:
        raise CommandError(f"{command} takes {n} argument(s), got {len(args)}")
    return args
