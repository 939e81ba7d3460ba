"""Built-in XML Schema type universe and per-type match probabilities.

A type's coverage weight w counts how many of the 44 built-in types it can
represent; the match probability of a simple parameter is w / 44. Complex
types combine their children's probabilities according to the compositor:

    sequence : (1 / n!)  * product(child factors)   -- order is fixed
    choice   : (1 / 2^n) * product(child factors)   -- one branch is picked
    all      :             product(child factors)   -- order is free

All arithmetic is exact (fractions.Fraction); decimal rendering happens at
report time only.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import factorial

from .errors import CoverageTableError, TypeCycleError, UnknownTypeError

# Size of the built-in type universe: 19 primitive + 25 derived types.
UNIVERSE_SIZE = 44

COMPOSITORS = frozenset({"sequence", "choice", "all"})

BUILTIN_SIMPLE = "builtin-simple"
COMPLEX = "complex"

# Weights the coverage rule pins regardless of table edits.
_ANCHORS = {"string": 44, "boolean": 1, "float": 15}

# Nesting deeper than this cannot come from a finite acyclic schema.
_MAX_DEPTH = 500

ENV_TABLE_PATH = "BPELREUSE_COVERAGE_TABLE"


@dataclass(frozen=True)
class TypeRef:
    """Resolved reference to a parameter type.

    Either a built-in simple type (leaf) or a complex type with a compositor
    and at least one child. Instances are immutable trees; cycles cannot be
    constructed through the public API.
    """

    kind: str
    name: str
    compositor: str | None = None
    children: tuple["TypeRef", ...] = ()

    def __post_init__(self):
        if self.kind == BUILTIN_SIMPLE:
            if self.compositor is not None or self.children:
                raise ValueError("simple types carry no compositor or children")
        elif self.kind == COMPLEX:
            if self.compositor not in COMPOSITORS:
                raise ValueError(f"unknown compositor: {self.compositor!r}")
            if len(self.children) < 1:
                raise ValueError("complex types need at least one child")
        else:
            raise ValueError(f"unknown type kind: {self.kind!r}")

    @staticmethod
    def simple(name: str) -> "TypeRef":
        return TypeRef(kind=BUILTIN_SIMPLE, name=name)

    @staticmethod
    def complex(name: str, compositor: str, children: tuple["TypeRef", ...]) -> "TypeRef":
        return TypeRef(kind=COMPLEX, name=name, compositor=compositor, children=tuple(children))

    def structure(self) -> str:
        """Canonical structural rendering, independent of declared names."""
        if self.kind == BUILTIN_SIMPLE:
            return self.name
        inner = ",".join(c.structure() for c in self.children)
        return f"{self.compositor}({inner})"


def structural_name(compositor: str, children: tuple[TypeRef, ...]) -> str:
    """Stable identifier for an anonymous complex type, derived from its shape."""
    canon = f"{compositor}(" + ",".join(c.structure() for c in children) + ")"
    digest = hashlib.sha1(canon.encode("utf-8")).hexdigest()[:10]
    return f"anon-{digest}"


@dataclass(frozen=True)
class BuiltinTypeTable:
    """The 44 built-in types with their coverage weights."""

    entries: dict[str, int] = field(repr=False)
    source: str = "<builtin>"

    @property
    def d(self) -> int:
        return UNIVERSE_SIZE

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def coverage_weight(self, name: str) -> int:
        """Weight of a built-in type; raises UnknownTypeError for absent names."""
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownTypeError(name) from None

    def simple_match_probability(self, name: str) -> Fraction:
        """w / 44 for a built-in simple type, as an exact fraction."""
        return Fraction(self.coverage_weight(name), UNIVERSE_SIZE)

    def complex_match_probability(self, t: TypeRef) -> Fraction:
        """Recursive compositor evaluation for a complex TypeRef."""
        if t.kind != COMPLEX:
            raise ValueError(f"not a complex type: {t.name!r}")
        return self._evaluate(t, depth=0)

    def complex_mismatch_probability(self, t: TypeRef) -> Fraction:
        """Complement of the complex match probability, exposed for reports."""
        return 1 - self.complex_match_probability(t)

    def match_probability(self, t: TypeRef) -> Fraction:
        """Match probability of any TypeRef, simple or complex."""
        if t.kind == BUILTIN_SIMPLE:
            return self.simple_match_probability(t.name)
        return self.complex_match_probability(t)

    def _evaluate(self, t: TypeRef, depth: int) -> Fraction:
        if depth > _MAX_DEPTH:
            raise TypeCycleError(f"type nesting exceeds {_MAX_DEPTH} levels at {t.name!r}")
        product = Fraction(1)
        for child in t.children:
            if child.kind == BUILTIN_SIMPLE:
                product *= self.simple_match_probability(child.name)
            else:
                product *= self._evaluate(child, depth + 1)
        n = len(t.children)
        if t.compositor == "sequence":
            return Fraction(1, factorial(n)) * product
        if t.compositor == "choice":
            return Fraction(1, 2**n) * product
        return product  # all: order-free, no coefficient


def _parse_table(text: str, source: str) -> BuiltinTypeTable:
    entries: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CoverageTableError(f"{source}:{lineno}: expected 'name weight', got {raw!r}")
        name, weight_text = parts
        try:
            weight = int(weight_text)
        except ValueError:
            raise CoverageTableError(f"{source}:{lineno}: weight is not an integer: {weight_text!r}") from None
        if name in entries:
            raise CoverageTableError(f"{source}:{lineno}: duplicate type {name!r}")
        if not 1 <= weight <= UNIVERSE_SIZE:
            raise CoverageTableError(f"{source}:{lineno}: weight {weight} outside 1..{UNIVERSE_SIZE}")
        entries[name] = weight

    if len(entries) != UNIVERSE_SIZE:
        raise CoverageTableError(f"{source}: expected {UNIVERSE_SIZE} types, found {len(entries)}")
    for name, pinned in _ANCHORS.items():
        if entries.get(name) != pinned:
            raise CoverageTableError(f"{source}: weight of {name!r} must be {pinned}, found {entries.get(name)}")
    return BuiltinTypeTable(entries=entries, source=source)


def load_table(path: str | os.PathLike[str] | None = None) -> BuiltinTypeTable:
    """Load the coverage table from `path`, or the packaged default.

    Override order: explicit path argument, then the BPELREUSE_COVERAGE_TABLE
    environment variable, then the table shipped with the package.
    """
    if path is None:
        path = os.environ.get(ENV_TABLE_PATH) or None
    if path is None:
        text = resources.files("bpelreuse").joinpath("data/builtin_types.txt").read_text("utf-8")
        return _parse_table(text, "builtin_types.txt")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CoverageTableError(f"cannot read coverage table {path}: {exc}") from exc
    return _parse_table(text, str(path))
