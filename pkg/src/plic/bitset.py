"""Bitmask helpers for subsets of the message set [1:m].

Message ``i`` (1-based) corresponds to bit ``i - 1``.  Masks are plain
ints: cheap to hash, order, and feed to the numeric kernels.  Two
orderings appear throughout:

* canonical order ``(popcount, mask)`` -- used for every in-memory
  family so iteration is deterministic;
* file order ``(length, lexicographic index list)`` -- used when
  writing JSON documents, where humans read index lists.
"""

from __future__ import annotations

from collections.abc import Iterable
from typing import Iterator

from .errors import MessageIndexOutOfRange


def mask_of(indices: Iterable[int], m: int) -> int:
    """Build a mask from 1-based message indices, validating range."""
    mask = 0
    for i in indices:
        if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= m:
            raise MessageIndexOutOfRange(f"message index {i!r} not in 1..{m}")
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    """1-based indices of the set bits, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def canon_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def file_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (mask.bit_count(), indices_of(mask))


def sort_canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(masks, key=canon_key))


def full_mask(m: int) -> int:
    return (1 << m) - 1


def complement(mask: int, m: int) -> int:
    return full_mask(m) & ~mask


def is_subset(a: int, b: int) -> bool:
    return a & b == a


def is_strict_subset(a: int, b: int) -> bool:
    return a != b and a & b == a


def least_outside(mask: int, m: int) -> int:
    """Smallest 1-based message index not in ``mask``.

    Requires ``mask`` to be a proper subset of the full set.
    """
    for i in range(m):
        if not mask >> i & 1:
            return i + 1
    raise ValueError("mask covers all messages")


def iter_strict_submasks(mask: int) -> Iterator[int]:
    """All strict submasks of ``mask``, including 0, descending numerically."""
    if mask == 0:
        return
    sub = (mask - 1) & mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def iter_supersets(mask: int, m: int) -> Iterator[int]:
    """All strict supersets of ``mask`` within [1:m], excluding the full set."""
    free = complement(mask, m)
    add = free
    while add:
        sup = mask | add
        if sup != full_mask(m):
            yield sup
        add = (add - 1) & free
