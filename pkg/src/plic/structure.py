"""Structural analysis of the absent family.

The key objects are nested chains ``H_1 c H_2 c ... c H_L`` of absent
sets (strict inclusions).  The longest such chain caps how many skips
any realisation can be forced to make, which yields the baseline lower
bound ``m - L_max``.  A chain length ``L`` is *breakable* when every
L-chain admits an index ``k`` and a message ``a`` outside ``H_k`` such
that no absent chain of length ``L - k`` sits above ``H_k u {a}``;
breakability at ``L`` sharpens the bound to ``m - L + 1``.

The look-ahead helpers identify absent subfamilies that force a skip
several steps in advance: either the family fails to cover ``[1:m]``,
or it is a minimal cover of ``[1:m]`` some subfamily of which has a
present intersection.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import bitset
from .errors import ANotAbsent, LOutOfRange, PreconditionViolated
from .instance import PicInstance


@dataclass(frozen=True)
class NestedChain:
    """A strictly increasing run of absent sets, shortest first."""

    sets: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class BreakWitness:
    """Evidence that one chain is breakable at position ``k`` via ``a``."""

    chain: tuple[int, ...]
    k: int
    a: int


@lru_cache(maxsize=None)
def _heights(inst: PicInstance) -> dict[int, int]:
    """Length of the longest absent chain starting at each absent set."""
    heights: dict[int, int] = {}
    for h in reversed(inst.absent):  # supersets precede in this order
        best = 0
        for g, hg in heights.items():
            if bitset.is_strict_subset(h, g) and hg > best:
                best = hg
        heights[h] = best + 1
    return heights


def longest_nested_chain(inst: PicInstance) -> tuple[int, NestedChain]:
    """Maximum chain length and its canonically least witness."""
    heights = _heights(inst)
    l_max = max(heights.values(), default=0)
    sets: list[int] = []
    prev = -1
    for need in range(l_max, 0, -1):
        nxt = min(
            (
                h
                for h, height in heights.items()
                if height == need and (prev < 0 or bitset.is_strict_subset(prev, h))
            ),
            key=bitset.canon_key,
        )
        sets.append(nxt)
        prev = nxt
    return l_max, NestedChain(tuple(sets))


@lru_cache(maxsize=None)
def longest_chain_above(inst: PicInstance, t: int) -> int:
    """Longest absent chain all of whose members contain ``t``."""
    heights: dict[int, int] = {}
    for h in reversed(inst.absent):
        if not bitset.is_subset(t, h):
            continue
        best = 0
        for g, hg in heights.items():
            if bitset.is_strict_subset(h, g) and hg > best:
                best = hg
        heights[h] = best + 1
    return max(heights.values(), default=0)


def _chains_of_length(inst: PicInstance, length: int) -> Iterable[tuple[int, ...]]:
    """All absent chains of exactly ``length`` sets, canonical order."""
    heights = _heights(inst)

    def extend(prefix: tuple[int, ...], last: int, left: int):
        if left == 0:
            yield prefix
            return
        for h in inst.absent:
            if heights[h] >= left and bitset.is_strict_subset(last, h):
                yield from extend(prefix + (h,), h, left - 1)

    for h in inst.absent:
        if heights[h] >= length:
            yield from extend((h,), h, length - 1)


def is_l_chain_breakable(
    inst: PicInstance, length: int
) -> tuple[bool, tuple[BreakWitness, ...]]:
    """Whether every absent ``length``-chain can be broken.

    Returns one witness per chain (least ``(k, a)``); vacuously true,
    with no witnesses, when no chain of that length exists.
    """
    if not 2 <= length <= inst.m - 1:
        raise LOutOfRange(f"chain length {length} not in 2..{inst.m - 1}")
    witnesses = []
    for sets in _chains_of_length(inst, length):
        found = None
        for k in range(1, length):
            hk = sets[k - 1]
            for a in range(1, inst.m + 1):
                if hk >> (a - 1) & 1:
                    continue
                if longest_chain_above(inst, hk | 1 << (a - 1)) < length - k:
                    found = BreakWitness(sets, k, a)
                    break
            if found:
                break
        if found is None:
            return False, ()
        witnesses.append(found)
    return True, tuple(witnesses)


def smallest_breakable_bound(inst: PicInstance) -> int | None:
    """``m - L' + 1`` for the least breakable chain length ``L'``, if any.

    Only lengths up to the longest chain are informative: the bound
    must beat ``m - L_max`` to matter, and vacuous lengths carry no
    chain to break.
    """
    l_max, _ = longest_nested_chain(inst)
    for length in range(2, min(l_max, inst.m - 1) + 1):
        breakable, _ = is_l_chain_breakable(inst, length)
        if breakable:
            return inst.m - length + 1
    return None


def structural_lower_bound(inst: PicInstance) -> int:
    """Best lower bound from chain length and breakability combined."""
    l_max, _ = longest_nested_chain(inst)
    bound = inst.m - l_max
    sharpened = smallest_breakable_bound(inst)
    if sharpened is not None and sharpened > bound:
        return sharpened
    return bound


# --- look-ahead skip analysis ---

NOT_COVER = "not-cover"
MINIMAL_COVER = "minimal-cover-present-intersection"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class LookAheadVerdict:
    kind: str
    s_witness: tuple[int, ...] | None = None
    intersection: int | None = None


def _validate_family(inst: PicInstance, family: Iterable[int]) -> tuple[int, ...]:
    fam = bitset.sort_canonical(family)
    for h in fam:
        if not inst.is_absent(h):
            raise ANotAbsent(
                f"{list(bitset.indices_of(h))} is not an absent receiver"
            )
    return fam


def look_ahead_applicable(
    inst: PicInstance, family: Iterable[int]
) -> LookAheadVerdict:
    """Classify an absent subfamily for the look-ahead skip rule.

    Verdicts: the family fails to cover ``[1:m]``; or it is a minimal
    cover and some subfamily of two or more members has a present
    intersection (the least such subfamily is reported); otherwise
    inapplicable.
    """
    fam = _validate_family(inst, family)
    union = 0
    for h in fam:
        union |= h
    if union != inst.full:
        return LookAheadVerdict(NOT_COVER)
    # minimal cover: dropping any member loses some message
    for h in fam:
        rest = 0
        for g in fam:
            if g != h:
                rest |= g
        if rest == inst.full:
            return LookAheadVerdict(INAPPLICABLE)
    for size in range(2, len(fam) + 1):
        for sub in combinations(fam, size):
            t = inst.full
            for h in sub:
                t &= h
            if inst.is_present(t):
                return LookAheadVerdict(MINIMAL_COVER, sub, t)
    return LookAheadVerdict(INAPPLICABLE)


def look_ahead_skip(
    inst: PicInstance, family: Iterable[int], chain_mask: int
) -> int | None:
    """The least message a realisation at ``chain_mask`` may safely skip.

    Under the not-cover verdict any message outside the family union
    works, provided the chain has not escaped the union.  Under the
    minimal-cover verdict, the skip lands in the private region of one
    cover member whose removal still contains the chain.  Returns None
    when the chain has already escaped every qualifying union.
    """
    fam = _validate_family(inst, family)
    verdict = look_ahead_applicable(inst, fam)
    if verdict.kind == INAPPLICABLE:
        raise PreconditionViolated("look-ahead skip rule does not apply")
    if verdict.kind == NOT_COVER:
        union = 0
        for h in fam:
            union |= h
        if not bitset.is_subset(chain_mask, union):
            return None
        return bitset.least_outside(union, inst.m)
    assert verdict.s_witness is not None
    candidates = []
    for h1 in verdict.s_witness:
        rest = 0
        for g in fam:
            if g != h1:
                rest |= g
        if bitset.is_subset(chain_mask, rest):
            pool = h1 & ~rest
            candidates.extend(bitset.indices_of(pool))
    if not candidates:
        return None
    return min(candidates)
