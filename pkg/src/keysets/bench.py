"""Benchmark helpers: workload generators, timing, and report output.

Key-set generators mirror two experiment designs. The sequential family
over attributes A1..An is X_i = {{A1..Ai},{A(i+1)},...,{An}}, walking
from the unary key set (i = 1) to the single full key (i = n). The
random generator draws one key of m distinct attributes and keeps the
remaining attributes as singletons, giving cardinality n + 1 - m.

Randomness comes from the Mersenne Twister (``random.Random``) with an
explicit seed and an explicit partial Fisher-Yates selection, so the
same seed reproduces the same workload everywhere.

Reports serialize to JSON lines and CSV; each carries the raw repeat
times (warm-up excluded), their mean, and the violation counts.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import KeySet, Relation, Schema, format_keyset
from .validation import violating_blocks, violating_tuples_naive

__all__ = [
    "BenchReport",
    "GeneratorSpec",
    "format_table",
    "gen_random_keyset",
    "gen_sequential_keysets",
    "keysets_from_spec",
    "reports_to_csv",
    "reports_to_jsonl",
    "run_bench",
    "synthetic_relation",
    "violation_percentage",
]


@dataclass(frozen=True)
class GeneratorSpec:
    mode: str
    param: int
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("sequential", "random"):
            raise ValueError(f"unknown generator mode {self.mode!r}")
        if self.param < 1:
            raise ValueError("generator parameter must be >= 1")


@dataclass(frozen=True)
class BenchReport:
    dataset: str
    keyset: str
    algo: str
    repeats: int
    times_ms: tuple[float, ...]
    mean_ms: float
    violating_tuples: int
    blocks: int | None

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "keyset": self.keyset,
            "algo": self.algo,
            "repeats": self.repeats,
            "times_ms": list(self.times_ms),
            "mean_ms": self.mean_ms,
            "violating_tuples": self.violating_tuples,
            "blocks": self.blocks,
        }


def gen_sequential_keysets(schema: Schema) -> tuple[KeySet, ...]:
    """The full sequential family X_1..X_n over the schema."""
    n = len(schema)
    out = []
    for i in range(1, n + 1):
        keys = [frozenset(range(i))]
        keys.extend(frozenset({a}) for a in range(i, n))
        out.append(KeySet(frozenset(keys)))
    return tuple(out)


def gen_random_keyset(schema: Schema, m: int, seed: int | None = None) -> KeySet:
    """One random key of ``m`` attributes plus all other attributes as
    singletons. Attribute selection is a partial Fisher-Yates shuffle."""
    n = len(schema)
    if not 1 <= m <= n:
        raise ValueError(f"key size {m} must be between 1 and {n}")
    rng = random.Random(seed)
    idx = list(range(n))
    for j in range(m):
        k = rng.randrange(j, n)
        idx[j], idx[k] = idx[k], idx[j]
    keys = [frozenset(idx[:m])]
    keys.extend(frozenset({a}) for a in idx[m:])
    return KeySet(frozenset(keys))


def keysets_from_spec(schema: Schema, spec: GeneratorSpec, count: int = 1) -> tuple[KeySet, ...]:
    """Materialize a generator spec.

    Sequential mode yields the single X_param (``count`` is ignored);
    random mode yields ``count`` key sets with seeds seed, seed+1, ...
    """
    if spec.mode == "sequential":
        family = gen_sequential_keysets(schema)
        if spec.param > len(family):
            raise ValueError(f"sequential index {spec.param} exceeds schema size {len(family)}")
        return (family[spec.param - 1],)
    base = spec.seed if spec.seed is not None else 0
    return tuple(gen_random_keyset(schema, spec.param, base + i) for i in range(count))


def synthetic_relation(
    schema: Schema,
    rows: int,
    null_rate: float,
    seed: int | None = None,
    distinct: int = 4,
) -> Relation:
    """Random relation: per cell, a missing value with probability
    ``null_rate``, otherwise one of ``distinct`` values for that column."""
    if not 0.0 <= null_rate <= 1.0:
        raise ValueError("null_rate must be within [0, 1]")
    if distinct < 1:
        raise ValueError("need at least one distinct value")
    rng = random.Random(seed)
    width = len(schema)
    values = []
    for _ in range(rows):
        values.append(
            tuple(
                None if rng.random() < null_rate else str(rng.randrange(distinct))
                for _ in range(width)
            )
        )
    return Relation.from_values(schema, values)


def _measure(fn: Callable[[], object], repeats: int) -> tuple[tuple[float, ...], object]:
    result = fn()  # warm-up, discarded from timing
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - start) * 1000.0)
    return tuple(times), result


def run_bench(
    relation: Relation,
    keysets: Sequence[KeySet],
    algo: str = "linear",
    repeats: int = 10,
    dataset: str = "",
    labels: Sequence[str] | None = None,
) -> list[BenchReport]:
    """Time one validation algorithm over each key set.

    ``algo`` is ``"naive"`` (all-pairs scan) or ``"linear"`` (block
    refinement). Each key set gets one discarded warm-up call and
    ``repeats`` timed calls.
    """
    if algo not in ("naive", "linear"):
        raise ValueError(f"unknown algorithm {algo!r}")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    reports = []
    for pos, ks in enumerate(keysets):
        label = labels[pos] if labels is not None else format_keyset(ks, relation.schema)
        if algo == "naive":
            times, result = _measure(lambda: violating_tuples_naive(relation, ks), repeats)
            violating, blocks = len(result), None
        else:
            times, result = _measure(lambda: violating_blocks(relation, ks), repeats)
            violating, blocks = len(result.row_ids), len(result)
        reports.append(
            BenchReport(
                dataset=dataset,
                keyset=label,
                algo=algo,
                repeats=repeats,
                times_ms=times,
                mean_ms=sum(times) / len(times),
                violating_tuples=violating,
                blocks=blocks,
            )
        )
    return reports


def violation_percentage(relation: Relation, keysets: Sequence[KeySet]) -> float:
    """Fraction in [0, 1] of the key sets the relation violates."""
    if not keysets:
        raise ValueError("need at least one key set")
    violated = sum(1 for ks in keysets if violating_blocks(relation, ks))
    return violated / len(keysets)


def reports_to_jsonl(reports: Sequence[BenchReport]) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=False) + "\n" for r in reports)


def reports_to_csv(reports: Sequence[BenchReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["dataset", "keyset", "algo", "repeats", "times_ms", "mean_ms", "violating_tuples", "blocks"]
    )
    for r in reports:
        writer.writerow(
            [
                r.dataset,
                r.keyset,
                r.algo,
                r.repeats,
                " ".join(f"{t:.3f}" for t in r.times_ms),
                f"{r.mean_ms:.3f}",
                r.violating_tuples,
                "" if r.blocks is None else r.blocks,
            ]
        )
    return buf.getvalue()


def format_table(reports: Sequence[BenchReport]) -> str:
    headers = ("dataset", "keyset", "algo", "mean_ms", "violating", "blocks")
    rows = [
        (
            r.dataset,
            r.keyset if len(r.keyset) <= 40 else r.keyset[:37] + "...",
            r.algo,
            f"{r.mean_ms:.3f}",
            str(r.violating_tuples),
            "-" if r.blocks is None else str(r.blocks),
        )
        for r in reports
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    out = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for row in rows:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(out) + "\n"
