"""Relational data model for key-set integrity constraints.

A key set is a non-empty collection of keys, where each key is a non-empty
set of attributes. A relation satisfies a key set when every pair of
distinct rows is separated by at least one key: both rows are total on the
key (no missing value on its attributes) and their projections differ.

Missing values are represented as ``None``. Two ``None`` cells never count
as matching; this never has to be special-cased because every comparison
first requires totality on the attributes being compared.

Attributes are referred to by column index into a :class:`Schema`. An
attribute set is a plain ``frozenset[int]``. Display order is canonical:
attributes inside a key follow schema order, keys inside a key set are
sorted lexicographically by their index tuples, so formatted output is
stable and diffable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "AttrSet",
    "KeySet",
    "KeySetFamily",
    "ParseError",
    "Relation",
    "Row",
    "Schema",
    "attr_sort_key",
    "format_attr_name",
    "format_attr_set",
    "format_keyset",
    "format_schema",
    "is_x_total",
    "pair_separated_by",
    "pair_violates",
    "parse_attr_set",
    "parse_keyset",
    "parse_keyset_lines",
    "parse_schema",
]

AttrSet = frozenset[int]


def attr_sort_key(attrs: AttrSet) -> tuple[int, ...]:
    """Canonical sort key for attribute sets: the sorted index tuple."""
    return tuple(sorted(attrs))


@dataclass(frozen=True)
class Schema:
    """An ordered, duplicate-free list of attribute names."""

    attributes: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ValueError("a schema needs at least one attribute")
        for name in self.attributes:
            if not isinstance(name, str) or not name:
                raise ValueError(f"attribute names must be non-empty strings, got {name!r}")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("attribute names must be unique")

    @classmethod
    def of(cls, *names: str) -> "Schema":
        return cls(tuple(names))

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.attributes)}

    def __len__(self) -> int:
        return len(self.attributes)

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def name(self, index: int) -> str:
        return self.attributes[index]

    def attr_set(self, names: Iterable[str]) -> AttrSet:
        return frozenset(self.index(n) for n in names)

    def names(self, attrs: AttrSet) -> tuple[str, ...]:
        """Attribute names of ``attrs`` in schema order."""
        return tuple(self.attributes[i] for i in sorted(attrs))

    def all_attrs(self) -> AttrSet:
        return frozenset(range(len(self.attributes)))


@dataclass(frozen=True)
class KeySet:
    """A non-empty set of non-empty keys (attribute index sets)."""

    keys: frozenset[AttrSet]

    def __post_init__(self) -> None:
        object.__setattr__(self, "keys", frozenset(frozenset(k) for k in self.keys))
        if not self.keys:
            raise ValueError("a key set needs at least one key")
        for key in self.keys:
            if not key:
                raise ValueError("keys must be non-empty")
            for a in key:
                if not isinstance(a, int) or a < 0:
                    raise ValueError(f"attribute indices must be non-negative ints, got {a!r}")

    @classmethod
    def of(cls, *keys: Iterable[int]) -> "KeySet":
        return cls(frozenset(frozenset(k) for k in keys))

    @cached_property
    def sorted_keys(self) -> tuple[AttrSet, ...]:
        """Keys in canonical order (lexicographic by sorted index tuple)."""
        return tuple(sorted(self.keys, key=attr_sort_key))

    @property
    def attributes(self) -> AttrSet:
        """Union of all keys."""
        return frozenset().union(*self.keys)

    def is_unary(self) -> bool:
        return all(len(k) == 1 for k in self.keys)

    def fits(self, schema: Schema) -> bool:
        return all(a < len(schema) for k in self.keys for a in k)

    def __iter__(self) -> Iterator[AttrSet]:
        return iter(self.sorted_keys)

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, key: object) -> bool:
        return key in self.keys


KeySetFamily = tuple[KeySet, ...]


@dataclass(frozen=True)
class Row:
    """One tuple of a relation. ``None`` stands for a missing value."""

    row_id: int
    values: tuple[str | None, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))

    def is_total(self, attrs: AttrSet) -> bool:
        return all(self.values[a] is not None for a in attrs)

    def projection(self, attrs: AttrSet) -> tuple[str | None, ...]:
        return tuple(self.values[a] for a in sorted(attrs))


@dataclass(frozen=True)
class Relation:
    """A bag of rows over a schema; row ids make duplicates distinct."""

    schema: Schema
    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        width = len(self.schema)
        seen: set[int] = set()
        for row in self.rows:
            if len(row.values) != width:
                raise ValueError(
                    f"row {row.row_id} has {len(row.values)} cells, schema has {width}"
                )
            if row.row_id in seen:
                raise ValueError(f"duplicate row id {row.row_id}")
            seen.add(row.row_id)

    @classmethod
    def from_values(
        cls,
        schema: Schema,
        values: Iterable[Sequence[str | None]],
        row_ids: Sequence[int] | None = None,
    ) -> "Relation":
        rows_in = [tuple(v) for v in values]
        if row_ids is None:
            row_ids = range(len(rows_in))
        return cls(schema, tuple(Row(i, v) for i, v in zip(row_ids, rows_in, strict=True)))

    @cached_property
    def by_id(self) -> dict[int, Row]:
        return {row.row_id: row for row in self.rows}

    def __len__(self) -> int:
        return len(self.rows)


def is_x_total(row: Row, attrs: AttrSet) -> bool:
    """True iff the row has no missing value on any attribute of ``attrs``."""
    return row.is_total(attrs)


def pair_separated_by(t: Row, t2: Row, attrs: AttrSet) -> bool:
    """True iff both rows are total on ``attrs`` and differ somewhere on it.

    The empty attribute set never separates anything: both rows are
    vacuously total on it but cannot differ on it.
    """
    vs, vs2 = t.values, t2.values
    diff = False
    for a in attrs:
        v, v2 = vs[a], vs2[a]
        if v is None or v2 is None:
            return False
        if v != v2:
            diff = True
    return diff


def pair_violates(t: Row, t2: Row, ks: KeySet) -> bool:
    """True iff no key of ``ks`` separates the two distinct rows."""
    if t.row_id == t2.row_id:
        raise ValueError("pair_violates needs two distinct rows")
    return not any(pair_separated_by(t, t2, key) for key in ks.keys)


# --------------------------------------------------------------------------
# Text grammar.
#
#   keyset   := '{' key (',' key)* '}'
#   key      := '{' attr (',' attr)* '}'
#   attr     := identifier | quoted
#   identifier matches [A-Za-z_][A-Za-z0-9_]*, quoted is double-quoted with
#   backslash escapes. Whitespace between tokens is ignored.


class ParseError(ValueError):
    """Syntax or name error in key-set text, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "{},":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch == '"':
            start = i
            i += 1
            buf: list[str] = []
            while i < n and text[i] != '"':
                if text[i] == "\\":
                    if i + 1 >= n:
                        raise ParseError("unterminated escape", i)
                    buf.append(text[i + 1])
                    i += 2
                else:
                    buf.append(text[i])
                    i += 1
            if i >= n:
                raise ParseError("unterminated quoted name", start)
            i += 1
            if not buf:
                raise ParseError("empty quoted name", start)
            tokens.append(("name", "".join(buf), start))
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(("name", m.group(), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, schema: Schema):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.schema = schema

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            what = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.pos += 1
        return tok

    def attr(self) -> int:
        kind, value, at = self.take("name")
        try:
            return self.schema.index(value)
        except KeyError:
            raise ParseError(f"unknown attribute {value!r}", at) from None

    def attr_set(self, allow_empty: bool = False) -> AttrSet:
        _, _, open_at = self.take("{")
        if self.peek()[0] == "}":
            self.take("}")
            if allow_empty:
                return frozenset()
            raise ParseError("empty key", open_at)
        members = {self.attr()}
        while self.peek()[0] == ",":
            self.take(",")
            members.add(self.attr())
        self.take("}")
        return frozenset(members)

    def keyset(self) -> KeySet:
        _, _, open_at = self.take("{")
        if self.peek()[0] == "}":
            self.take("}")
            raise ParseError("empty key set", open_at)
        keys = {self.attr_set()}
        while self.peek()[0] == ",":
            self.take(",")
            keys.add(self.attr_set())
        self.take("}")
        return KeySet(frozenset(keys))

    def finish(self) -> None:
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[1]!r}", tok[2])


def parse_keyset(text: str, schema: Schema) -> KeySet:
    """Parse key-set text like ``{{room,time},{injury,time}}``."""
    p = _Parser(text, schema)
    ks = p.keyset()
    p.finish()
    return ks


def parse_attr_set(text: str, schema: Schema) -> AttrSet:
    """Parse a single attribute set like ``{room,time}``; ``{}`` is allowed."""
    p = _Parser(text, schema)
    attrs = p.attr_set(allow_empty=True)
    p.finish()
    return attrs


def parse_keyset_lines(text: str, schema: Schema) -> KeySetFamily:
    """Parse one key set per non-blank line; ``#`` lines are comments."""
    out: list[KeySet] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_keyset(line, schema))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc.args[0]}", exc.position) from None
    return tuple(out)


def format_attr_name(name: str) -> str:
    if _IDENT.fullmatch(name):
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_attr_set(attrs: AttrSet, schema: Schema) -> str:
    inner = ",".join(format_attr_name(schema.name(a)) for a in sorted(attrs))
    return "{" + inner + "}"


def format_keyset(ks: KeySet, schema: Schema) -> str:
    """Canonical text form; ``parse_keyset`` inverts it exactly."""
    return "{" + ",".join(format_attr_set(k, schema) for k in ks.sorted_keys) + "}"


def parse_schema(text: str) -> Schema:
    """Parse a comma-separated attribute name list into a schema."""
    tokens = _tokenize(text)
    pos = 0
    names: list[str] = []
    while True:
        kind, value, at = tokens[pos]
        if kind != "name":
            raise ParseError("expected an attribute name", at)
        names.append(value)
        pos += 1
        kind, _, at = tokens[pos]
        if kind == "end":
            break
        if kind != ",":
            raise ParseError("expected ',' between attribute names", at)
        pos += 1
    return Schema(tuple(names))


def format_schema(schema: Schema) -> str:
    return ",".join(format_attr_name(name) for name in schema.attributes)
