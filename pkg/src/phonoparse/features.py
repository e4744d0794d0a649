"""Feature bundles and the matching algebra every other module builds on.

A feature bundle is a partial mapping from feature names to atomic values.
An absent name is *uninstantiated*: nothing is known about that feature, so
it is compatible with any value.  Two matching relations are used:

* unification (analysis side): bundles combine unless some feature carries
  two distinct concrete values;
* containment (synthesis side): one bundle must already hold every entry of
  the other.

Rule patterns may put a named variable in value position.  Within a single
rule application attempt a variable binds to the first concrete value it
meets and must agree with it everywhere else; bindings are discarded
between attempts.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class VariableRef:
    """Named placeholder for a feature value inside a rule pattern."""

    name: str

    def __repr__(self) -> str:
        return f"%{self.name}"


Value = Union[str, VariableRef]


class UnboundVariableError(LookupError):
    """A pattern variable was used with no binding to resolve it."""


class FeatureBundle(Mapping):
    """Immutable partial mapping from feature name to value.

    Accepts a mapping, an iterable of ``(name, value)`` pairs, or keyword
    arguments; entry order is normalized so equal bundles hash equally.
    """

    __slots__ = ("_index", "_items")

    def __init__(self, entries: Mapping[str, Value] | Iterable[tuple[str, Value]] = (),
                 **kwargs: Value) -> None:
        index = dict(entries)
        index.update(kwargs)
        for name, value in index.items():
            if not isinstance(name, str) or not name:
                raise TypeError(f"feature name must be a non-empty string, got {name!r}")
            if not isinstance(value, (str, VariableRef)):
                raise TypeError(f"feature value must be a string or VariableRef, got {value!r}")
        self._index = {name: index[name] for name in sorted(index)}
        self._items = tuple(self._index.items())

    def __getitem__(self, name: str) -> Value:
        return self._index[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._index)

    def __len__(self) -> int:
        return len(self._index)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FeatureBundle):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        if not self._items:
            return "{}"
        parts = []
        for name, value in self._items:
            if value in ("+", "-"):
                parts.append(f"{value}{name}")
            else:
                parts.append(f"{name}={value!r}" if isinstance(value, str) else f"{value!r}{name}")
        return "{" + ", ".join(parts) + "}"

    def has_variables(self) -> bool:
        return any(isinstance(v, VariableRef) for v in self._index.values())

    def variable_names(self) -> frozenset[str]:
        return frozenset(v.name for v in self._index.values() if isinstance(v, VariableRef))

    def without_variables(self) -> "FeatureBundle":
        """Drop every variable-valued entry, keeping concrete ones."""
        return FeatureBundle((n, v) for n, v in self._items if not isinstance(v, VariableRef))


EMPTY_BUNDLE = FeatureBundle()


class VariableBinding(Mapping):
    """Immutable mapping from variable name to the concrete value it took."""

    __slots__ = ("_index", "_items")

    def __init__(self, entries: Mapping[str, str] | Iterable[tuple[str, str]] = ()) -> None:
        index = dict(entries)
        self._index = {name: index[name] for name in sorted(index)}
        self._items = tuple(self._index.items())

    def bind(self, name: str, value: str) -> "VariableBinding":
        """Return a new binding extended with ``name -> value``."""
        extended = dict(self._index)
        extended[name] = value
        return VariableBinding(extended)

    def __getitem__(self, name: str) -> str:
        return self._index[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._index)

    def __len__(self) -> int:
        return len(self._index)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VariableBinding):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        return "{" + ", ".join(f"%{n}->{v}" for n, v in self._items) + "}"


EMPTY_BINDING = VariableBinding()


def _require_concrete(bundle: FeatureBundle, role: str) -> None:
    if bundle.has_variables():
        raise ValueError(f"{role} bundle may not contain variables: {bundle!r}")


def unify(a: FeatureBundle, b: FeatureBundle) -> FeatureBundle | None:
    """Merge two variable-free bundles, or None when a feature clashes.

    The result holds every entry of both bundles; an uninstantiated feature
    on either side never blocks the merge.
    """
    _require_concrete(a, "unify")
    _require_concrete(b, "unify")
    merged = dict(a)
    for name, value in b.items():
        if merged.setdefault(name, value) != value:
            return None
    return FeatureBundle(merged)


def contains(a: FeatureBundle, b: FeatureBundle) -> bool:
    """True iff every entry of b appears in a with the identical value."""
    _require_concrete(a, "contains")
    _require_concrete(b, "contains")
    return all(a.get(name) == value for name, value in b.items())


def uninstantiate(a: FeatureBundle, names: Iterable[str]) -> FeatureBundle:
    """Remove the named features from a bundle, leaving the rest untouched."""
    doomed = frozenset(names)
    if not doomed:
        return a
    return FeatureBundle((n, v) for n, v in a.items() if n not in doomed)


def resolve(pattern: FeatureBundle, binding: VariableBinding = EMPTY_BINDING,
            *, drop_unbound: bool = False) -> FeatureBundle:
    """Replace every variable in a pattern with its bound value.

    An unbound variable raises UnboundVariableError, or is silently omitted
    when ``drop_unbound`` is set (the feature then stays uninstantiated).
    """
    entries = {}
    for name, value in pattern.items():
        if isinstance(value, VariableRef):
            if value.name in binding:
                entries[name] = binding[value.name]
            elif not drop_unbound:
                raise UnboundVariableError(
                    f"variable %{value.name} (feature {name!r}) has no binding")
        else:
            entries[name] = value
    return FeatureBundle(entries)


def overwrite(a: FeatureBundle, b: FeatureBundle,
              binding: VariableBinding = EMPTY_BINDING) -> FeatureBundle:
    """Set each feature named in b to b's (variable-resolved) value.

    Features of a not named in b are preserved; variables in b must be
    bound or UnboundVariableError is raised.
    """
    _require_concrete(a, "overwrite target")
    merged = dict(a)
    merged.update(resolve(b, binding))
    return FeatureBundle(merged)


def unify_pattern(pattern: FeatureBundle, concrete: FeatureBundle,
                  binding: VariableBinding = EMPTY_BINDING) -> VariableBinding | None:
    """Unification-style match of a pattern against a concrete bundle.

    Returns the extended binding on success, None on a clash.  A feature
    uninstantiated in ``concrete`` matches anything, including variables,
    which then bind nothing: the match stands as an assumption to be
    validated once a fully specified form is available.
    """
    _require_concrete(concrete, "unify_pattern concrete")
    result = binding
    for name, value in pattern.items():
        actual = concrete.get(name)
        if isinstance(value, VariableRef):
            bound = result.get(value.name)
            if bound is None:
                if actual is not None:
                    result = result.bind(value.name, actual)
            elif actual is not None and actual != bound:
                return None
        elif actual is not None and actual != value:
            return None
    return result


def contains_pattern(pattern: FeatureBundle, concrete: FeatureBundle,
                     binding: VariableBinding = EMPTY_BINDING) -> VariableBinding | None:
    """Containment-style match of a pattern against a concrete bundle.

    Every pattern feature must be instantiated in ``concrete``: concrete
    entries by the identical value, variable entries by whatever value the
    segment carries (binding it, or agreeing with the prior binding).
    """
    _require_concrete(concrete, "contains_pattern concrete")
    result = binding
    for name, value in pattern.items():
        actual = concrete.get(name)
        if actual is None:
            return None
        if isinstance(value, VariableRef):
            bound = result.get(value.name)
            if bound is None:
                result = result.bind(value.name, actual)
            elif actual != bound:
                return None
        elif actual != value:
            return None
    return result


OPTIONAL_FEATURE = "optional"
BINARY_VALUES = frozenset({"+", "-"})


@dataclass(frozen=True)
class FeatureSystem:
    """Declares the known features, their allowed values, and which of them
    are diacritic (word-level, nonphonetic) rather than segmental.

    The engine-managed binary feature ``optional`` is always present and may
    not be mentioned by grammars.
    """

    features: Mapping[str, frozenset[str]]
    diacritics: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        normalized = {OPTIONAL_FEATURE: BINARY_VALUES}
        for name, values in self.features.items():
            if not name:
                raise ValueError("feature names must be non-empty")
            vals = frozenset(values)
            if not vals:
                raise ValueError(f"feature {name!r} has an empty value set")
            if name == OPTIONAL_FEATURE and vals != BINARY_VALUES:
                raise ValueError("the reserved feature 'optional' is binary")
            normalized[name] = vals
        object.__setattr__(self, "features", normalized)
        unknown = self.diacritics - normalized.keys()
        if unknown:
            raise ValueError(f"diacritics name undeclared features: {sorted(unknown)}")

    def phonetic_features(self) -> frozenset[str]:
        return frozenset(self.features) - self.diacritics - {OPTIONAL_FEATURE}

    def split_diacritics(self, bundle: FeatureBundle) -> tuple[FeatureBundle, FeatureBundle]:
        """Split a bundle into its (segmental, diacritic) parts."""
        seg = FeatureBundle((n, v) for n, v in bundle.items() if n not in self.diacritics)
        dia = FeatureBundle((n, v) for n, v in bundle.items() if n in self.diacritics)
        return seg, dia

    def validate_bundle(self, bundle: FeatureBundle, *, allow_variables: bool = False,
                        context: str = "bundle") -> None:
        """Check feature names and concrete values against this system."""
        for name, value in bundle.items():
            if name == OPTIONAL_FEATURE:
                raise ValueError(f"{context}: the feature 'optional' is engine-managed")
            allowed = self.features.get(name)
            if allowed is None:
                raise ValueError(f"{context}: unknown feature {name!r}")
            if isinstance(value, VariableRef):
                if not allow_variables:
                    raise ValueError(f"{context}: variables are not allowed here")
            elif value not in allowed:
                raise ValueError(
                    f"{context}: value {value!r} not allowed for feature {name!r}")


def binary_feature_system(*names: str, diacritics: Iterable[str] = ()) -> FeatureSystem:
    """Convenience constructor for an all-binary feature system."""
    return FeatureSystem({name: BINARY_VALUES for name in names},
                         frozenset(diacritics))
