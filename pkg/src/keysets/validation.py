"""Key-set validation over relations with missing values.

Two independent routes compute which rows take part in a violation:

* :func:`violating_tuples_naive` checks every pair of rows against every
  key, straight from the definition. Quadratic in the number of rows; the
  pairwise comparisons are vectorized with numpy so large inputs stay
  usable, but the output is exactly the definitional all-pairs result.

* :func:`violating_blocks` refines a block partition one key at a time.
  Rows that are total on the current key are hashed by their projection;
  incomplete rows join every hash class, because a missing value can match
  anything. Each key is processed in one pass, so the run time is linear
  in rows times total key size for bounded block overlap.

The union of the returned blocks always equals the naive violating set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import KeySet, Relation, Row, attr_sort_key

__all__ = ["BlockSet", "block_trace", "satisfies", "violating_blocks", "violating_tuples_naive"]


@dataclass(frozen=True)
class BlockSet:
    """Groups of row ids that jointly violate a key set; each has size >= 2."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        canon = sorted(set(self.blocks), key=lambda b: tuple(sorted(b)))
        object.__setattr__(self, "blocks", tuple(canon))

    @property
    def row_ids(self) -> frozenset[int]:
        if not self.blocks:
            return frozenset()
        return frozenset().union(*self.blocks)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __bool__(self) -> bool:
        return bool(self.blocks)


def _check_fits(relation: Relation, ks: KeySet) -> None:
    if not ks.fits(relation.schema):
        raise ValueError("key set references attributes outside the relation's schema")


def _split_on_key(blocks: list[list[Row]], key_cols: tuple[int, ...]) -> list[list[Row]]:
    """One refinement round: split every block on one key.

    Rows total on the key hash by projection; incomplete rows are merged
    into every hash class. A block consisting only of incomplete rows
    survives as a whole. Classes of size < 2 are dropped, identical result
    blocks are merged.
    """
    seen: dict[frozenset[int], list[Row]] = {}
    for block in blocks:
        classes: dict[tuple[str | None, ...], list[Row]] = {}
        incomplete: list[Row] = []
        for row in block:
            proj = tuple(row.values[c] for c in key_cols)
            if any(v is None for v in proj):
                incomplete.append(row)
            else:
                classes.setdefault(proj, []).append(row)
        if classes:
            for group in classes.values():
                merged = group + incomplete if incomplete else group
                if len(merged) > 1:
                    seen.setdefault(frozenset(r.row_id for r in merged), merged)
        elif len(incomplete) > 1:
            seen.setdefault(frozenset(r.row_id for r in incomplete), incomplete)
    ordered = sorted(seen.items(), key=lambda item: tuple(sorted(item[0])))
    return [rows for _, rows in ordered]


def block_trace(relation: Relation, ks: KeySet) -> list[BlockSet]:
    """Raw block state after each key, in canonical key order.

    Entry ``i`` is the block set after refining with the first ``i + 1``
    keys; the last entry is the final (unfiltered) state.
    """
    _check_fits(relation, ks)
    blocks: list[list[Row]] = [list(relation.rows)] if relation.rows else []
    trace: list[BlockSet] = []
    for key in ks.sorted_keys:
        if blocks:
            blocks = _split_on_key(blocks, tuple(sorted(key)))
        trace.append(BlockSet(tuple(frozenset(r.row_id for r in b) for b in blocks)))
    return trace


def _maximal_only(blocks: tuple[frozenset[int], ...]) -> tuple[frozenset[int], ...]:
    kept: list[frozenset[int]] = []
    for b in sorted(set(blocks), key=len, reverse=True):
        if not any(b < other for other in kept):
            kept.append(b)
    return tuple(kept)


def violating_blocks(relation: Relation, ks: KeySet) -> BlockSet:
    """Violating rows grouped into blocks, reporting maximal blocks only.

    The relation satisfies ``ks`` iff the result is empty. Use
    :func:`block_trace` for the raw per-key states.
    """
    trace = block_trace(relation, ks)
    final = trace[-1] if trace else BlockSet(())
    return BlockSet(_maximal_only(final.blocks))


def satisfies(relation: Relation, ks: KeySet) -> bool:
    """True iff every pair of distinct rows is separated by some key."""
    _check_fits(relation, ks)
    blocks: list[list[Row]] = [list(relation.rows)] if relation.rows else []
    for key in ks.sorted_keys:
        if not blocks:
            break
        blocks = _split_on_key(blocks, tuple(sorted(key)))
    return not blocks


def _column_codes(relation: Relation) -> np.ndarray:
    """Per-column integer codes; missing values become -1."""
    n, width = len(relation.rows), len(relation.schema)
    codes = np.empty((n, width), dtype=np.int32)
    for j in range(width):
        seen: dict[str, int] = {}
        col = codes[:, j]
        for i, row in enumerate(relation.rows):
            v = row.values[j]
            col[i] = -1 if v is None else seen.setdefault(v, len(seen))
    return codes


def violating_tuples_naive(relation: Relation, ks: KeySet) -> frozenset[int]:
    """Row ids with a partner row that no key separates (all-pairs scan)."""
    _check_fits(relation, ks)
    n = len(relation.rows)
    if n < 2:
        return frozenset()
    codes = _column_codes(relation)
    keys = [np.array(sorted(key), dtype=np.intp) for key in sorted(ks.keys, key=attr_sort_key)]
    total = [
        (codes[:, cols] >= 0).all(axis=1) if len(cols) > 1 else codes[:, cols[0]] >= 0
        for cols in keys
    ]
    flagged = np.zeros(n, dtype=bool)
    chunk = max(1, 8_000_000 // n)
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        m = stop - start
        # remaining[i, j]: no key processed so far separates rows start+i and j
        remaining = np.ones((m, n), dtype=bool)
        remaining[np.arange(m), np.arange(start, stop)] = False
        for cols, tot in zip(keys, total):
            both_total = tot[start:stop, None] & tot[None, :]
            if not both_total.any():
                continue
            diff = np.zeros((m, n), dtype=bool)
            for c in cols:
                diff |= codes[start:stop, c, None] != codes[None, :, c]
            remaining &= ~(both_total & diff)
            if not remaining.any():
                break
        flagged[start:stop] |= remaining.any(axis=1)
    return frozenset(relation.rows[i].row_id for i in np.nonzero(flagged)[0])
