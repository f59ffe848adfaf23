"""Deciding logical implication for families of key sets.

``sigma`` implies ``phi`` when every relation satisfying every member of
``sigma`` also satisfies ``phi``. Whether that holds is decided without
building relations: for each way of choosing one key from each member of
``sigma``, collect the keys of ``phi`` contained in the union of the
chosen keys; the choice is fine iff some chosen key is contained in the
union of that collection. If every choice is fine, ``phi`` is implied.
A failing choice yields a two-row counterexample relation directly.

An empty ``sigma`` implies nothing: two identical total rows satisfy
every member of the empty family and violate any key set.

Also here: the unary-fragment decider (quadratic instead of exponential
when ``phi`` contains only singleton keys), a brute-force oracle that
enumerates all behaviorally distinct two-row relations, and a reduction
from 3-CNF formulas producing instances whose implication answer is the
unsatisfiability of the formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .core import AttrSet, KeySet, KeySetFamily, Relation, Schema

__all__ = [
    "ChoiceProductTooLarge",
    "CnfFormula",
    "CounterexampleWitness",
    "DEFAULT_CHOICE_CAP",
    "Decision",
    "ImplicationInstance",
    "build_counterexample",
    "from_3sat",
    "implies",
    "implies_bruteforce",
    "implies_unary",
    "parse_dimacs",
    "satisfiable",
]

DEFAULT_CHOICE_CAP = 10**6


class ChoiceProductTooLarge(RuntimeError):
    """The key-choice product exceeds the configured cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"choice product has {size} elements, cap is {cap}")
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class ImplicationInstance:
    schema: Schema
    sigma: KeySetFamily
    phi: KeySet

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", tuple(self.sigma))
        for ks in (*self.sigma, self.phi):
            if not ks.fits(self.schema):
                raise ValueError("key set references attributes outside the schema")


@dataclass(frozen=True)
class CounterexampleWitness:
    """A failing key choice plus the two-row relation built from it."""

    choice: tuple[AttrSet, ...]
    relation: Relation


@dataclass(frozen=True)
class Decision:
    implied: bool
    witness: CounterexampleWitness | None


def build_counterexample(choice: Sequence[AttrSet], inst: ImplicationInstance) -> Relation:
    """Two-row relation satisfying ``sigma`` and violating ``phi``.

    ``choice`` must pick one key per member of ``sigma`` and be failing.
    Row 0 is constant "0" and total. For the empty family the second row
    is identical; otherwise it carries "1" on the smallest free attribute
    of each chosen key, "0" elsewhere on the union of the chosen keys, and
    missing values everywhere else.
    """
    schema = inst.schema
    choice = tuple(choice)
    if len(choice) != len(inst.sigma):
        raise ValueError("choice must pick exactly one key per member of sigma")
    base = tuple("0" for _ in range(len(schema)))
    if not choice:
        return Relation.from_values(schema, [base, base])
    for key, ks in zip(choice, inst.sigma):
        if key not in ks:
            raise ValueError("choice contains a key not drawn from its key set")
    union = frozenset().union(*choice)
    covered = frozenset().union(*(y for y in inst.phi.keys if y <= union))
    if any(x <= covered for x in choice):
        raise ValueError("choice is not failing, no counterexample exists for it")
    marks = {min(x - covered) for x in choice}
    second = tuple(
        "1" if a in marks else "0" if a in union else None for a in range(len(schema))
    )
    return Relation.from_values(schema, [base, second])


def implies(inst: ImplicationInstance, *, max_choices: int = DEFAULT_CHOICE_CAP) -> Decision:
    """Decide whether ``sigma`` implies ``phi``; witness a non-implication.

    Runs through key choices in canonical order, so a returned witness is
    the canonically smallest failing choice. Raises
    :class:`ChoiceProductTooLarge` when the product of the member sizes
    exceeds ``max_choices``.
    """
    if not inst.sigma:
        return Decision(False, CounterexampleWitness((), build_counterexample((), inst)))
    size = prod(len(ks) for ks in inst.sigma)
    if size > max_choices:
        raise ChoiceProductTooLarge(size, max_choices)
    phi_keys = inst.phi.sorted_keys
    for choice in itertools.product(*(ks.sorted_keys for ks in inst.sigma)):
        union = frozenset().union(*choice)
        covered = frozenset().union(*(y for y in phi_keys if y <= union))
        if not any(x <= covered for x in choice):
            witness = CounterexampleWitness(choice, build_counterexample(choice, inst))
            return Decision(False, witness)
    return Decision(True, None)


def implies_unary(sigma: Sequence[KeySet], phi: KeySet) -> bool:
    """Implication restricted to a unary ``phi`` (singleton keys only).

    Implied iff the attribute union of some member of ``sigma`` sits
    inside the attribute set of ``phi``. Cost is linear in the total size
    of ``sigma`` for a fixed ``phi``.
    """
    if not phi.is_unary():
        raise ValueError("phi must contain only singleton keys")
    allowed = phi.attributes
    return any(ks.attributes <= allowed for ks in sigma)


def implies_bruteforce(inst: ImplicationInstance, *, max_attrs: int = 12) -> bool:
    """Oracle: enumerate all behaviorally distinct two-row relations.

    Per attribute a row pair is either equal and total, unequal and total,
    or not both total; nothing else matters for key sets. ``sigma``
    implies ``phi`` iff no pattern satisfies all of ``sigma`` while
    violating ``phi``. Exponential in the schema size, hence the cap.
    """
    n = len(inst.schema)
    if n > max_attrs:
        raise ValueError(f"schema has {n} attributes, brute-force cap is {max_attrs}")
    sigma_keys = [ks.sorted_keys for ks in inst.sigma]
    phi_keys = inst.phi.sorted_keys

    def separated(keys: tuple[AttrSet, ...], total: frozenset[int], neq: frozenset[int]) -> bool:
        return any(x <= total and not x.isdisjoint(neq) for x in keys)

    for states in itertools.product((0, 1, 2), repeat=n):
        total = frozenset(a for a, s in enumerate(states) if s != 2)
        neq = frozenset(a for a, s in enumerate(states) if s == 1)
        if separated(phi_keys, total, neq):
            continue
        if all(separated(keys, total, neq) for keys in sigma_keys):
            return False
    return True


# --------------------------------------------------------------------------
# 3-CNF reduction: implication answers are co-satisfiability answers.

Literal = tuple[str, bool]


@dataclass(frozen=True)
class CnfFormula:
    """CNF with at most three literals per clause.

    A literal is ``(variable, positive)``. Clauses are literal sets.
    """

    variables: tuple[str, ...]
    clauses: tuple[frozenset[Literal], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in self.clauses))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        known = set(self.variables)
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            if len(clause) > 3:
                raise ValueError(f"clause has {len(clause)} literals, at most 3 allowed")
            for var, _ in clause:
                if var not in known:
                    raise ValueError(f"clause uses undeclared variable {var!r}")


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; variables are named x1..xV.

    Clauses longer than three literals are rejected, as is a clause with
    no literals or a missing terminating 0.
    """
    num_vars: int | None = None
    clauses: list[frozenset[Literal]] = []
    current: set[Literal] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed problem line: {raw!r}")
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ValueError("clause data before the problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not current:
                    raise ValueError("empty clause")
                if len(current) > 3:
                    raise ValueError(f"clause has {len(current)} literals, at most 3 allowed")
                clauses.append(frozenset(current))
                current = set()
                continue
            var = abs(lit)
            if var > num_vars:
                raise ValueError(f"literal {lit} exceeds declared variable count {num_vars}")
            current.add((f"x{var}", lit > 0))
    if current:
        raise ValueError("last clause is not terminated by 0")
    if num_vars is None:
        raise ValueError("missing problem line")
    return CnfFormula(tuple(f"x{i}" for i in range(1, num_vars + 1)), tuple(clauses))


def satisfiable(formula: CnfFormula) -> bool:
    """Truth-table satisfiability over the variables that actually occur."""
    used = [v for v in formula.variables if any((v, True) in c or (v, False) in c for c in formula.clauses)]
    for values in itertools.product((False, True), repeat=len(used)):
        assignment = dict(zip(used, values))
        if all(any(assignment[var] == pos for var, pos in clause) for clause in formula.clauses):
            return True
    return False


def from_3sat(formula: CnfFormula) -> ImplicationInstance:
    """Implication instance whose answer is the formula's unsatisfiability.

    For each occurring variable ``p`` the schema gets attributes ``p`` and
    ``not_p`` and ``sigma`` the two-key unary key set ``{{p},{not_p}}``;
    ``phi`` collects one key per clause, made of the clause's literal
    attributes. Picking one key per member of ``sigma`` then enumerates
    truth assignments (the chosen literal is the one read as false), and
    a choice fails exactly when no clause has all its literals false.
    Hence ``implies(...)`` is true iff the formula is unsatisfiable.
    """
    if not formula.clauses:
        raise ValueError("formula has no clauses")
    used = [
        v
        for v in formula.variables
        if any((v, True) in c or (v, False) in c for c in formula.clauses)
    ]
    for var in used:
        if var.startswith("not_"):
            raise ValueError(f"variable name {var!r} collides with the not_ prefix")
    names: list[str] = []
    for var in used:
        names.extend((var, f"not_{var}"))
    schema = Schema(tuple(names))
    sigma = tuple(
        KeySet.of({schema.index(var)}, {schema.index(f"not_{var}")}) for var in used
    )
    phi_keys = set()
    for clause in formula.clauses:
        phi_keys.add(
            frozenset(
                schema.index(var if pos else f"not_{var}") for var, pos in clause
            )
        )
    return ImplicationInstance(schema, sigma, KeySet(frozenset(phi_keys)))
