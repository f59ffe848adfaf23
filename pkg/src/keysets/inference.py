"""Axiomatic inference for key sets.

Three rules are sound and complete for key-set implication:

* Upward closure: from key set X derive X extended by any further keys.
* Refinement: replace one key by two non-empty parts that union to it.
* Composition: from X1 and X2 derive, for every pair of keys (K1, K2)
  drawn from them, a chosen set Z with Z contained in K1 union K2 and K1
  or K2 contained in Z; the derived key set collects the chosen sets.

Composition generalizes to n premises (some component key must sit inside
each chosen set). :func:`simulate_nary` replays any n-ary application as
a derivation using only binary Composition steps plus at most one final
Upward closure, and :func:`derive_keyset` builds, for any implied key
set, a derivation of the shape one n-ary Composition, then Refinements,
then at most one Upward closure.

Derivations are explicit objects: premises, steps with rule name,
references, parameters and claimed conclusion, and a final conclusion.
:func:`check_derivation` re-runs every step and accepts only exact
matches. A line-oriented text form round-trips through
:func:`format_derivation` and :func:`parse_derivation`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    AttrSet,
    KeySet,
    KeySetFamily,
    ParseError,
    Schema,
    format_attr_set,
    format_keyset,
    format_schema,
    parse_attr_set,
    parse_keyset,
    parse_schema,
)

__all__ = [
    "CompositionParams",
    "Derivation",
    "DerivationStep",
    "RefinementParams",
    "RuleError",
    "RULE_COMPOSITION",
    "RULE_NARY",
    "RULE_REFINEMENT",
    "RULE_UPWARD",
    "UpwardClosureParams",
    "apply_composition",
    "apply_nary_composition",
    "apply_refinement",
    "apply_upward_closure",
    "check_derivation",
    "derive_keyset",
    "first_invalid_step",
    "format_derivation",
    "parse_derivation",
    "simulate_nary",
]

RULE_UPWARD = "UpwardClosure"
RULE_REFINEMENT = "Refinement"
RULE_COMPOSITION = "Composition"
RULE_NARY = "NaryComposition"

Ref = tuple[str, int]


class RuleError(ValueError):
    """A rule application that breaks its side conditions."""


def apply_upward_closure(ks: KeySet, extra: KeySet) -> KeySet:
    """Add the keys of ``extra`` to ``ks``."""
    return KeySet(ks.keys | extra.keys)


def apply_refinement(ks: KeySet, target: AttrSet, left: AttrSet, right: AttrSet) -> KeySet:
    """Replace ``target`` by two non-empty parts whose union is ``target``.

    The parts may overlap; either may equal the target itself.
    """
    if target not in ks.keys:
        raise RuleError("refinement target is not a key of the key set")
    if not left or not right:
        raise RuleError("refinement parts must be non-empty")
    if left | right != target:
        raise RuleError("refinement parts must union to the target")
    return KeySet((ks.keys - {target}) | {left, right})


def _combo_text(combo: tuple[AttrSet, ...]) -> str:
    return "|".join("{" + ",".join(str(a) for a in sorted(k)) + "}" for k in combo)


def _compose(family: Sequence[KeySet], choice: Mapping[tuple[AttrSet, ...], AttrSet]) -> KeySet:
    family = tuple(family)
    if not family:
        raise RuleError("composition needs at least one premise")
    out: set[AttrSet] = set()
    for combo in itertools.product(*(ks.sorted_keys for ks in family)):
        if combo not in choice:
            raise RuleError(f"choice has no entry for key tuple {_combo_text(combo)}")
        chosen = frozenset(choice[combo])
        union = frozenset().union(*combo)
        if not chosen <= union:
            raise RuleError(
                f"chosen set escapes the key union for key tuple {_combo_text(combo)}"
            )
        if not any(x <= chosen for x in combo):
            raise RuleError(
                f"no component key is contained in the chosen set for {_combo_text(combo)}"
            )
        out.add(chosen)
    return KeySet(frozenset(out))


def apply_composition(
    x1: KeySet, x2: KeySet, choice: Mapping[tuple[AttrSet, AttrSet], AttrSet]
) -> KeySet:
    """Binary Composition; ``choice`` must cover all key pairs of x1 and x2."""
    return _compose((x1, x2), choice)


def apply_nary_composition(
    family: Sequence[KeySet], choice: Mapping[tuple[AttrSet, ...], AttrSet]
) -> KeySet:
    """Composition over n >= 1 premises.

    For n = 1 the side conditions force every chosen set to equal its key,
    so the result is the premise itself.
    """
    return _compose(family, choice)


# --------------------------------------------------------------------------
# Derivation objects.


@dataclass(frozen=True)
class UpwardClosureParams:
    extra: KeySet


@dataclass(frozen=True)
class RefinementParams:
    target: AttrSet
    left: AttrSet
    right: AttrSet


@dataclass(frozen=True)
class CompositionParams:
    """Choice entries ((K1, ..., Kn), Z) in canonical product order."""

    entries: tuple[tuple[tuple[AttrSet, ...], AttrSet], ...]

    def as_mapping(self) -> dict[tuple[AttrSet, ...], AttrSet]:
        return dict(self.entries)

    @property
    def arity(self) -> int:
        return len(self.entries[0][0]) if self.entries else 0


StepParams = UpwardClosureParams | RefinementParams | CompositionParams


@dataclass(frozen=True)
class DerivationStep:
    rule: str
    refs: tuple[Ref, ...]
    params: StepParams
    conclusion: KeySet

    def __post_init__(self) -> None:
        object.__setattr__(self, "refs", tuple((str(k), int(i)) for k, i in self.refs))


@dataclass(frozen=True)
class Derivation:
    premises: KeySetFamily
    steps: tuple[DerivationStep, ...]
    conclusion: KeySet

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "steps", tuple(self.steps))


def _entries_for(
    family: Sequence[KeySet], mapping: Mapping[tuple[AttrSet, ...], AttrSet]
) -> CompositionParams:
    entries = tuple(
        (combo, mapping[combo])
        for combo in itertools.product(*(ks.sorted_keys for ks in family))
    )
    return CompositionParams(entries)


def _resolve(d: Derivation, derived: list[KeySet], ref: Ref, upto: int) -> KeySet:
    kind, idx = ref
    if kind == "p":
        if not 0 <= idx < len(d.premises):
            raise RuleError(f"premise reference p{idx} out of range")
        return d.premises[idx]
    if kind == "s":
        if not 0 <= idx < upto:
            raise RuleError(f"step reference s{idx} is not an earlier step")
        return derived[idx]
    raise RuleError(f"unknown reference kind {kind!r}")


def _apply_step(rule: str, inputs: list[KeySet], params: StepParams) -> KeySet:
    if rule == RULE_UPWARD:
        if len(inputs) != 1 or not isinstance(params, UpwardClosureParams):
            raise RuleError("upward closure takes one input and a key-set parameter")
        return apply_upward_closure(inputs[0], params.extra)
    if rule == RULE_REFINEMENT:
        if len(inputs) != 1 or not isinstance(params, RefinementParams):
            raise RuleError("refinement takes one input and a target/left/right parameter")
        return apply_refinement(inputs[0], params.target, params.left, params.right)
    if rule == RULE_COMPOSITION:
        if len(inputs) != 2 or not isinstance(params, CompositionParams):
            raise RuleError("composition takes exactly two inputs and a choice table")
        return _compose(inputs, params.as_mapping())
    if rule == RULE_NARY:
        if not inputs or not isinstance(params, CompositionParams):
            raise RuleError("n-ary composition takes n >= 1 inputs and a choice table")
        return _compose(inputs, params.as_mapping())
    raise RuleError(f"unknown rule {rule!r}")


def first_invalid_step(d: Derivation) -> int | None:
    """Index of the first failing step, ``len(steps)`` when only the final
    conclusion is unsupported, ``None`` when the derivation is valid."""
    derived: list[KeySet] = []
    for i, step in enumerate(d.steps):
        try:
            inputs = [_resolve(d, derived, ref, i) for ref in step.refs]
            result = _apply_step(step.rule, inputs, step.params)
        except (RuleError, ValueError):
            return i
        if result != step.conclusion:
            return i
        derived.append(result)
    if any(p == d.conclusion for p in d.premises):
        return None
    if d.steps and d.steps[-1].conclusion == d.conclusion:
        return None
    return len(d.steps)


def check_derivation(d: Derivation) -> bool:
    """True iff every step re-derives exactly and the conclusion is the
    last step's result or one of the premises."""
    return first_invalid_step(d) is None


# --------------------------------------------------------------------------
# Simulating n-ary Composition with binary steps.


def _decompose(x: AttrSet, family: KeySetFamily) -> list[list[AttrSet]] | None:
    """Maximal per-premise key lists inside ``x``; None unless they cover x."""
    parts = [[y for y in ks.sorted_keys if y <= x] for ks in family]
    if any(not p for p in parts):
        return None
    if frozenset().union(*(y for p in parts for y in p)) != x:
        return None
    return parts


def _round_plan(
    x: AttrSet,
    family: KeySetFamily,
    choice: Mapping[tuple[AttrSet, ...], AttrSet],
) -> tuple[int, dict[AttrSet, AttrSet]]:
    """Pick the smallest premise index whose keys inside ``x`` are all full
    in some chosen set, mapping each such key to that chosen set."""
    parts = _decompose(x, family)
    if parts is None:
        raise RuleError(f"set {sorted(x)} is not a union of premise keys")
    n = len(family)
    for i in range(n):
        assignment: dict[AttrSet, AttrSet] = {}
        for y in parts[i]:
            pinned = [[y] if j == i else parts[j] for j in range(n)]
            found = None
            for combo in itertools.product(*pinned):
                chosen = choice[tuple(combo)]
                if y <= chosen:
                    found = chosen
                    break
            if found is None:
                break
            assignment[y] = found
        else:
            return i, assignment
    raise RuleError(f"no premise index works for set {sorted(x)}")


def simulate_nary(
    family: Sequence[KeySet], choice: Mapping[tuple[AttrSet, ...], AttrSet]
) -> Derivation:
    """Replay an n-ary Composition using binary Composition steps only,
    plus at most one final Upward closure.

    The conclusion equals ``apply_nary_composition(family, choice)``. The
    number of binary Composition steps stays within
    ``(n + 1) * |union of the premises' keys|``; if a pathological case
    ever exceeded that bound the function raises instead of quietly
    producing a longer derivation.
    """
    family = tuple(family)
    n = len(family)
    target = _compose(family, choice)
    if n == 1:
        return Derivation(family, (), target)

    steps: list[DerivationStep] = []

    def add_composition(
        left_ref: Ref, left: KeySet, right_ref: Ref, right: KeySet, mapping: dict
    ) -> tuple[KeySet, Ref]:
        result = _compose((left, right), mapping)
        steps.append(
            DerivationStep(
                RULE_COMPOSITION,
                (left_ref, right_ref),
                _entries_for((left, right), mapping),
                result,
            )
        )
        return result, ("s", len(steps) - 1)

    if n == 2:
        result, _ = add_composition(("p", 0), family[0], ("p", 1), family[1], dict(choice))
        return Derivation(family, tuple(steps), result)

    # Fold the premises left to right, always choosing the full pair union.
    # The intermediate result collects the unions of all key tuples.
    current: KeySet = family[0]
    current_ref: Ref = ("p", 0)
    for j in range(1, n):
        mapping = {
            (x, y): x | y for x in current.sorted_keys for y in family[j].sorted_keys
        }
        current, current_ref = add_composition(
            current_ref, current, ("p", j), family[j], mapping
        )

    # Rounds: combine with each premise once per round. Sets already in the
    # target stay fixed. Every other set X picks a premise index i whose
    # keys inside X are all full in some chosen set; X stays fixed until
    # the round reaches premise i, is transformed there (full keys go to
    # their chosen sets, the premise's other keys enlarge X), and the
    # products stay fixed for the rest of the round.
    target_keys = target.keys
    round_cap = len(set().union(*(ks.keys for ks in family)))
    rounds = 0
    while not current.keys <= target_keys:
        rounds += 1
        if rounds > round_cap:
            raise RuleError("simulation exceeded its round bound")
        plans = {
            x: _round_plan(x, family, choice)
            for x in current.sorted_keys
            if x not in target_keys
        }
        for j in range(n):
            mapping = {}
            for w in current.sorted_keys:
                plan = plans.get(w)
                transform = plan is not None and plan[0] == j
                for y in family[j].sorted_keys:
                    if transform:
                        mapping[(w, y)] = plan[1].get(y, w | y)
                    else:
                        mapping[(w, y)] = w
            current, current_ref = add_composition(
                current_ref, current, ("p", j), family[j], mapping
            )

    composition_steps = sum(1 for s in steps if s.rule == RULE_COMPOSITION)
    if composition_steps > (n + 1) * round_cap:
        raise RuleError(
            f"simulation used {composition_steps} binary compositions, "
            f"bound is {(n + 1) * round_cap}"
        )
    if current != target:
        steps.append(
            DerivationStep(
                RULE_UPWARD,
                (current_ref,),
                UpwardClosureParams(target),
                apply_upward_closure(current, target),
            )
        )
    return Derivation(family, tuple(steps), target)


# --------------------------------------------------------------------------
# Deriving an implied key set.


def derive_keyset(premises: Sequence[KeySet], goal: KeySet) -> Derivation:
    """Derivation of an implied ``goal``: one n-ary Composition, then
    Refinements, then at most one Upward closure.

    For each tuple of keys drawn from the premises, the composition keeps
    the union of the goal keys contained in the tuple's attribute union;
    refinements then split those unions back into the goal keys. Raises
    :class:`RuleError` when ``goal`` is not implied.
    """
    premises = tuple(premises)
    if not premises:
        raise RuleError("an empty premise family implies no key set")
    goal_keys = goal.sorted_keys
    mapping: dict[tuple[AttrSet, ...], AttrSet] = {}
    parts_for: dict[AttrSet, tuple[AttrSet, ...]] = {}
    for combo in itertools.product(*(p.sorted_keys for p in premises)):
        union = frozenset().union(*combo)
        zs = tuple(y for y in goal_keys if y <= union)
        covered = frozenset().union(*zs) if zs else frozenset()
        if not any(x <= covered for x in combo):
            raise RuleError("goal is not implied by the premises")
        mapping[combo] = covered
        parts_for.setdefault(covered, zs)

    composed = _compose(premises, mapping)
    steps: list[DerivationStep] = [
        DerivationStep(
            RULE_NARY,
            tuple(("p", i) for i in range(len(premises))),
            _entries_for(premises, mapping),
            composed,
        )
    ]
    current = composed
    current_ref: Ref = ("s", 0)
    for union_set in composed.sorted_keys:
        if union_set not in current.keys:
            continue  # already split apart while refining an earlier union
        parts = parts_for[union_set]
        if len(parts) <= 1:
            continue
        remaining = union_set
        for idx in range(len(parts) - 1):
            left = parts[idx]
            right = frozenset().union(*parts[idx + 1 :])
            current = apply_refinement(current, remaining, left, right)
            steps.append(
                DerivationStep(
                    RULE_REFINEMENT,
                    (current_ref,),
                    RefinementParams(remaining, left, right),
                    current,
                )
            )
            current_ref = ("s", len(steps) - 1)
            remaining = right
    if current != goal:
        steps.append(
            DerivationStep(
                RULE_UPWARD,
                (current_ref,),
                UpwardClosureParams(goal),
                apply_upward_closure(current, goal),
            )
        )
    return Derivation(premises, tuple(steps), goal)


# --------------------------------------------------------------------------
# Text form. One step per line:
#
#   <idx>: <rule> from <refs> with <params> => <keyset>
#
# wrapped by a schema line, numbered premise lines and a conclusion line.
# '#' lines are comments.


def _format_params(params: StepParams, schema: Schema) -> str:
    if isinstance(params, UpwardClosureParams):
        return format_keyset(params.extra, schema)
    if isinstance(params, RefinementParams):
        return (
            format_attr_set(params.target, schema)
            + "->"
            + format_attr_set(params.left, schema)
            + "|"
            + format_attr_set(params.right, schema)
        )
    entries = []
    for combo, chosen in params.entries:
        lhs = "|".join(format_attr_set(k, schema) for k in combo)
        entries.append(f"{lhs}->{format_attr_set(chosen, schema)}")
    return "; ".join(entries)


def format_derivation(d: Derivation, schema: Schema) -> str:
    lines = ["schema: " + format_schema(schema)]
    for i, premise in enumerate(d.premises):
        lines.append(f"premise {i}: {format_keyset(premise, schema)}")
    for i, step in enumerate(d.steps):
        refs = ",".join(f"{kind}{idx}" for kind, idx in step.refs)
        lines.append(
            f"{i}: {step.rule} from {refs} with {_format_params(step.params, schema)}"
            f" => {format_keyset(step.conclusion, schema)}"
        )
    lines.append(f"conclusion: {format_keyset(d.conclusion, schema)}")
    return "\n".join(lines) + "\n"


def _split_quoted(text: str, sep: str) -> list[str]:
    """Split on ``sep`` occurrences outside double-quoted names."""
    out: list[str] = []
    buf: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            buf.append(ch)
            i += 1
            while i < n:
                if text[i] == "\\" and i + 1 < n:
                    buf.append(text[i : i + 2])
                    i += 2
                    continue
                buf.append(text[i])
                i += 1
                if buf[-1] == '"':
                    break
            continue
        if text.startswith(sep, i):
            out.append("".join(buf))
            buf = []
            i += len(sep)
            continue
        buf.append(ch)
        i += 1
    out.append("".join(buf))
    return out


_STEP_RE = re.compile(r"^(\d+)\s*:\s*(\w+)\s+from\s+(.*)$")
_REF_RE = re.compile(r"^([ps])(\d+)$")


def _parse_params(rule: str, text: str, schema: Schema, lineno: int) -> StepParams:
    text = text.strip()
    if rule == RULE_UPWARD:
        return UpwardClosureParams(parse_keyset(text, schema))
    if rule == RULE_REFINEMENT:
        halves = _split_quoted(text, "->")
        if len(halves) != 2:
            raise ParseError(f"line {lineno}: refinement parameter needs one '->'", lineno)
        sides = _split_quoted(halves[1], "|")
        if len(sides) != 2:
            raise ParseError(f"line {lineno}: refinement split needs one '|'", lineno)
        return RefinementParams(
            parse_attr_set(halves[0].strip(), schema),
            parse_attr_set(sides[0].strip(), schema),
            parse_attr_set(sides[1].strip(), schema),
        )
    if rule in (RULE_COMPOSITION, RULE_NARY):
        entries = []
        for part in _split_quoted(text, ";"):
            part = part.strip()
            if not part:
                continue
            halves = _split_quoted(part, "->")
            if len(halves) != 2:
                raise ParseError(f"line {lineno}: choice entry needs one '->'", lineno)
            combo = tuple(
                parse_attr_set(p.strip(), schema) for p in _split_quoted(halves[0], "|")
            )
            entries.append((combo, parse_attr_set(halves[1].strip(), schema)))
        return CompositionParams(tuple(entries))
    raise ParseError(f"line {lineno}: unknown rule {rule!r}", lineno)


def parse_derivation(text: str) -> tuple[Derivation, Schema]:
    """Parse the text form back into a derivation and its schema."""
    schema: Schema | None = None
    premises: list[KeySet] = []
    steps: list[DerivationStep] = []
    conclusion: KeySet | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if conclusion is not None:
            raise ParseError(f"line {lineno}: content after the conclusion line", lineno)
        if line.startswith("schema:"):
            if schema is not None:
                raise ParseError(f"line {lineno}: duplicate schema line", lineno)
            schema = parse_schema(line[len("schema:") :].strip())
            continue
        if schema is None:
            raise ParseError(f"line {lineno}: schema line must come first", lineno)
        if line.startswith("premise"):
            m = re.match(r"^premise\s+(\d+)\s*:\s*(.*)$", line)
            if not m or int(m.group(1)) != len(premises):
                raise ParseError(f"line {lineno}: premises must be numbered in order", lineno)
            if steps:
                raise ParseError(f"line {lineno}: premise after a step line", lineno)
            premises.append(parse_keyset(m.group(2), schema))
            continue
        if line.startswith("conclusion:"):
            conclusion = parse_keyset(line[len("conclusion:") :].strip(), schema)
            continue
        m = _STEP_RE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: unrecognized line", lineno)
        if int(m.group(1)) != len(steps):
            raise ParseError(f"line {lineno}: steps must be numbered in order", lineno)
        rule = m.group(2)
        rest = m.group(3)
        with_split = _split_quoted(rest, " with ")
        if len(with_split) < 2:
            raise ParseError(f"line {lineno}: step line is missing ' with '", lineno)
        refs_text = with_split[0]
        tail = " with ".join(with_split[1:])
        arrow_split = _split_quoted(tail, " => ")
        if len(arrow_split) != 2:
            raise ParseError(f"line {lineno}: step line needs exactly one ' => '", lineno)
        refs = []
        for piece in refs_text.split(","):
            rm = _REF_RE.match(piece.strip())
            if not rm:
                raise ParseError(f"line {lineno}: bad reference {piece.strip()!r}", lineno)
            refs.append((rm.group(1), int(rm.group(2))))
        params = _parse_params(rule, arrow_split[0], schema, lineno)
        step_conclusion = parse_keyset(arrow_split[1].strip(), schema)
        steps.append(DerivationStep(rule, tuple(refs), params, step_conclusion))
    if schema is None:
        raise ParseError("missing schema line", 0)
    if conclusion is None:
        raise ParseError("missing conclusion line", 0)
    return Derivation(tuple(premises), tuple(steps), conclusion), schema
