"""Shared fixtures, oracles and strategies for the test suite.

Two relations appear throughout: the accident-ward snapshot (five
attributes, four rows, four missing values) and the hospital snapshot
(four attributes, four rows, two missing values) used for the block
refinement trace. Row ids are 1..4 in both so blocks read like t1..t4.

The terminal summary lists one PASS/FAIL/SKIP line per acceptance
criterion after the run.
"""

from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from keysets import KeySet, Relation, Schema, satisfies

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

# --------------------------------------------------------------------------
# Golden relations.

WARD_ROWS = (
    ("1", "Miller", None, "cardiac infarct", "Sunday, 19"),
    (None, None, None, "skull fracture", "Monday, 19"),
    ("2", "Maier", "Dresden", "leg fracture", "Sunday, 16"),
    ("1", "Miller", "Pirna", "leg fracture", "Sunday, 16"),
)

HOSPITAL_ROWS = (
    ("Miller", "Dresden", "cardiac infarct", "Sunday, 19"),
    ("Miller", None, "skull fracture", "Sunday, 19"),
    ("Maier", "Dresden", "cardiac infarct", "Sunday, 19"),
    ("Maier", "Dresden", None, "Monday, 20"),
)

WARD_CSV = (
    "room,name,address,injury,time\n"
    '1,Miller,?,cardiac infarct,"Sunday, 19"\n'
    '?,?,?,skull fracture,"Monday, 19"\n'
    '2,Maier,Dresden,leg fracture,"Sunday, 16"\n'
    '1,Miller,Pirna,leg fracture,"Sunday, 16"\n'
)


@pytest.fixture(scope="session")
def ward_schema() -> Schema:
    return Schema.of("room", "name", "address", "injury", "time")


@pytest.fixture(scope="session")
def ward(ward_schema) -> Relation:
    return Relation.from_values(ward_schema, WARD_ROWS, row_ids=(1, 2, 3, 4))


@pytest.fixture(scope="session")
def x1(ward_schema) -> KeySet:
    return KeySet.of(ward_schema.attr_set(("room", "time")), ward_schema.attr_set(("injury", "time")))


@pytest.fixture(scope="session")
def x2(ward_schema) -> KeySet:
    return KeySet.of(ward_schema.attr_set(("name", "time")), ward_schema.attr_set(("injury", "time")))


@pytest.fixture(scope="session")
def x_goal(ward_schema) -> KeySet:
    return KeySet.of(
        ward_schema.attr_set(("room", "name", "time")), ward_schema.attr_set(("injury", "time"))
    )


@pytest.fixture(scope="session")
def phi_prime(ward_schema) -> KeySet:
    return KeySet.of(*({ward_schema.index(n)} for n in ("room", "name", "address", "time")))


@pytest.fixture(scope="session")
def hospital_schema() -> Schema:
    return Schema.of("name", "address", "injury", "time")


@pytest.fixture(scope="session")
def hospital(hospital_schema) -> Relation:
    return Relation.from_values(hospital_schema, HOSPITAL_ROWS, row_ids=(1, 2, 3, 4))


@pytest.fixture(scope="session")
def hospital_trace_ks(hospital_schema) -> KeySet:
    return KeySet.of(
        hospital_schema.attr_set(("name", "address")),
        {hospital_schema.index("injury")},
        {hospital_schema.index("time")},
    )


# Four attributes A..D and the family whose non-consequences have no
# common perfect model.
@pytest.fixture(scope="session")
def abcd_schema() -> Schema:
    return Schema.of("A", "B", "C", "D")


@pytest.fixture(scope="session")
def sigma_abcd(abcd_schema) -> tuple[KeySet, KeySet]:
    return (KeySet.of({0}, {1}), KeySet.of({2}, {3}))


@pytest.fixture(scope="session")
def sigma1(abcd_schema) -> KeySet:
    return KeySet.of({0, 2}, {0, 3}, {1, 2})


@pytest.fixture(scope="session")
def sigma2(abcd_schema) -> KeySet:
    return KeySet.of({0, 3}, {1, 2}, {1, 3})


# Two-row relations witnessing that neither sigma1 nor sigma2 follows
# from the family, while their four-row union violates the family. All
# cell values are pairwise distinct; only the missing-value pattern
# matters.
LEFT1_ROWS = (("a1", "b1", None, "d1"), (None, "b2", "c2", "d2"))
LEFT2_ROWS = (("a3", "b3", "c3", None), ("a4", None, "c4", "d4"))


@pytest.fixture(scope="session")
def left1(abcd_schema) -> Relation:
    return Relation.from_values(abcd_schema, LEFT1_ROWS)


@pytest.fixture(scope="session")
def left2(abcd_schema) -> Relation:
    return Relation.from_values(abcd_schema, LEFT2_ROWS)


@pytest.fixture(scope="session")
def union_rel(abcd_schema) -> Relation:
    return Relation.from_values(abcd_schema, LEFT1_ROWS + LEFT2_ROWS)


# --------------------------------------------------------------------------
# Helpers importable via ``from conftest import ...``.


def pair_state(row, row2) -> tuple[str, ...]:
    """Per-attribute state of a row pair: equal / differ / partial.

    Only these three states matter to key sets, so two-row relations can
    be compared behaviorally regardless of the concrete cell values.
    """
    out = []
    for v, v2 in zip(row.values, row2.values):
        if v is None or v2 is None:
            out.append("partial")
        elif v == v2:
            out.append("equal")
        else:
            out.append("differ")
    return tuple(out)


def witness_refutes(inst, witness) -> bool:
    """The witness relation satisfies every premise and violates phi."""
    rel = witness.relation
    return all(satisfies(rel, ks) for ks in inst.sigma) and not satisfies(rel, inst.phi)


def random_keyset(rng: random.Random, width: int, max_keys: int = 3, max_key_size: int = 3) -> KeySet:
    # narrow schemas admit few distinct keys, so cap the draw accordingly
    available = sum(math.comb(width, n) for n in range(1, min(max_key_size, width) + 1))
    nkeys = rng.randint(1, min(max_keys, available))
    keys: set[frozenset[int]] = set()
    while len(keys) < nkeys:
        size = rng.randint(1, min(max_key_size, width))
        keys.add(frozenset(rng.sample(range(width), size)))
    return KeySet(frozenset(keys))


def random_family(
    rng: random.Random,
    width: int,
    max_members: int = 3,
    max_keys: int = 3,
    max_key_size: int = 3,
    min_members: int = 1,
) -> tuple[KeySet, ...]:
    count = rng.randint(min_members, max_members)
    return tuple(random_keyset(rng, width, max_keys, max_key_size) for _ in range(count))


def random_choice_map(rng: random.Random, family) -> dict:
    """A valid Composition choice: each tuple gets one component key plus padding."""
    mapping = {}
    for combo in itertools.product(*(ks.sorted_keys for ks in family)):
        union = frozenset().union(*combo)
        base = combo[rng.randrange(len(combo))]
        mapping[combo] = base | frozenset(a for a in union if rng.random() < 0.4)
    return mapping


# --------------------------------------------------------------------------
# Hypothesis strategies.

CELLS = ("0", "1", "2", None)


def attr_sets_st(width: int, max_size: int = 3):
    return st.frozensets(st.integers(0, width - 1), min_size=1, max_size=max_size)


def keysets_st(width: int, max_keys: int = 3, max_size: int = 3):
    return st.frozensets(attr_sets_st(width, max_size), min_size=1, max_size=max_keys).map(KeySet)


@st.composite
def relations_st(draw, min_width=2, max_width=5, max_rows=8, cells=CELLS):
    width = draw(st.integers(min_width, max_width))
    schema = Schema(tuple(f"c{i}" for i in range(width)))
    nrows = draw(st.integers(0, max_rows))
    rows = [tuple(draw(st.sampled_from(cells)) for _ in range(width)) for _ in range(nrows)]
    return Relation.from_values(schema, rows)


@st.composite
def relation_keyset_st(draw, min_width=2, max_width=5, max_rows=8, max_keys=3, max_size=3):
    rel = draw(relations_st(min_width, max_width, max_rows))
    ks = draw(keysets_st(len(rel.schema), max_keys, max_size))
    return rel, ks


# --------------------------------------------------------------------------
# One summary line per acceptance criterion.

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    if report.passed:
        outcome, detail = "PASS", ""
    elif report.skipped:
        reason = ""
        if isinstance(report.longrepr, tuple):
            reason = report.longrepr[2]
            reason = reason.split(":", 1)[1].strip() if reason.startswith("Skipped:") else reason
        outcome, detail = "SKIP", reason
    else:
        outcome, detail = "FAIL", ""
    _acceptance[name] = (outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance):
        outcome, detail = _acceptance[name]
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"{name}: {outcome}{suffix}")
