"""Problem instances for pliable index coding with absent receivers.

An instance over ``m`` messages is determined by its *absent* family:
the proper subsets of ``[1:m]`` that do **not** occur as a receiver's
side information.  Every other proper subset is a present receiver (the
receiver knowing everything is pointless and never listed).  Families
are stored as sorted tuples of bitmasks so all iteration is
deterministic.

Instances travel as JSON documents::

    {"m": 6, "absent": [[3], [1, 2, 3, 4], [3, 4, 5, 6]]}

with ``"present"`` accepted as an alternative key (exactly one of the
two must appear).  Canonical output sorts inner arrays ascending and
the outer array by (length, lexicographic).
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

from . import bitset
from .errors import (
    DuplicateReceiver,
    FullSetListed,
    HtildeNotStrictSubset,
    InstanceSemanticError,
    InstanceSyntaxError,
    InvalidInstance,
    InvalidPartition,
    QNotProper,
    TOutOfRange,
)

M_MIN = 2
M_MAX = 24

# Present-form documents are expanded to the complement family, which
# enumerates all 2^m proper subsets; keep that affordable.
_PRESENT_FORM_M_MAX = 16


@dataclass(frozen=True)
class PicInstance:
    """An instance: message count plus the absent family (canonical order)."""

    m: int
    absent: tuple[int, ...]

    @cached_property
    def full(self) -> int:
        return bitset.full_mask(self.m)

    @cached_property
    def absent_lookup(self) -> frozenset[int]:
        return frozenset(self.absent)

    @cached_property
    def present(self) -> tuple[int, ...]:
        """All present receiver masks, canonical order.  Materialized lazily:
        the complement family has 2^m - 1 - |absent| members."""
        absent = self.absent_lookup
        return tuple(
            mask
            for mask in bitset.sort_canonical(range(self.full))
            if mask not in absent
        )

    @cached_property
    def absent_union(self) -> int:
        union = 0
        for h in self.absent:
            union |= h
        return union

    def is_absent(self, mask: int) -> bool:
        return mask in self.absent_lookup

    def is_present(self, mask: int) -> bool:
        return 0 <= mask < self.full and mask not in self.absent_lookup

    def absent_sets(self) -> tuple[tuple[int, ...], ...]:
        """Absent family as 1-based index tuples, canonical order."""
        return tuple(bitset.indices_of(h) for h in self.absent)


@dataclass(frozen=True)
class Partition:
    """An ordered partition ``P_0, P_1, ..., P_L`` of ``[1:m]``.

    ``p0`` may be empty; the remaining parts may not.  Part order is
    meaningful (index sets refer to it), so it is preserved as given.
    """

    m: int
    p0: int
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.m > M_MAX:
            raise InvalidPartition(f"m={self.m} not in 1..{M_MAX}")
        if not self.parts:
            raise InvalidPartition("need at least one part beyond P_0")
        union = self.p0
        for p in self.parts:
            if p == 0:
                raise InvalidPartition("parts P_1..P_L must be nonempty")
            if union & p:
                raise InvalidPartition("parts overlap")
            union |= p
        if union != bitset.full_mask(self.m):
            raise InvalidPartition("parts do not cover [1:m]")

    @property
    def L(self) -> int:
        return len(self.parts)

    def nested_set(self, q_indices: Iterable[int]) -> int:
        """The absent-family member ``H_Q = P_0 u (union of P_i, i in Q)``."""
        mask = self.p0
        for i in q_indices:
            if not 1 <= i <= self.L:
                raise QNotProper(f"part index {i} not in 1..{self.L}")
            mask |= self.parts[i - 1]
        return mask


def partition(
    m: int, p0: Iterable[int], parts: Iterable[Iterable[int]]
) -> Partition:
    """Build a :class:`Partition` from 1-based index collections."""
    return Partition(
        m, bitset.mask_of(p0, m), tuple(bitset.mask_of(p, m) for p in parts)
    )


def _check_m(m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or not M_MIN <= m <= M_MAX:
        raise InvalidInstance(f"message count m={m!r} not in {M_MIN}..{M_MAX}")


def from_absent_masks(m: int, masks: Iterable[int]) -> PicInstance:
    """Build an instance from absent receiver masks."""
    _check_m(m)
    full = bitset.full_mask(m)
    seen: set[int] = set()
    for mask in masks:
        if mask & ~full or mask < 0:
            raise InstanceSemanticError(f"mask {mask:#x} uses bits beyond m={m}")
        if mask == full:
            raise FullSetListed("the full set [1:m] is never a receiver")
        if mask in seen:
            raise DuplicateReceiver(
                f"side-information set {list(bitset.indices_of(mask))} listed twice"
            )
        seen.add(mask)
    return PicInstance(m, bitset.sort_canonical(seen))


def from_absent(m: int, absent: Iterable[Iterable[int]]) -> PicInstance:
    """Build an instance from absent side-information sets (1-based indices)."""
    _check_m(m)
    return from_absent_masks(m, (bitset.mask_of(h, m) for h in absent))


def from_present(m: int, present: Iterable[Iterable[int]]) -> PicInstance:
    """Build an instance by listing the present receivers instead."""
    _check_m(m)
    if m > _PRESENT_FORM_M_MAX:
        raise InstanceSemanticError(
            f"present-form input supported up to m={_PRESENT_FORM_M_MAX}; "
            "list the absent family instead"
        )
    full = bitset.full_mask(m)
    seen: set[int] = set()
    for h in present:
        mask = bitset.mask_of(h, m)
        if mask == full:
            raise FullSetListed("the full set [1:m] is never a receiver")
        if mask in seen:
            raise DuplicateReceiver(
                f"side-information set {list(h)} listed twice"
            )
        seen.add(mask)
    return PicInstance(
        m, bitset.sort_canonical(mask for mask in range(full) if mask not in seen)
    )


# --- structured generators ---


def generate_perfectly_nested(part: Partition) -> PicInstance:
    """Absent family ``{H_Q : Q a proper subset of [1:L]}`` (2^L - 1 sets)."""
    _check_m(part.m)
    masks = []
    for q_bits in range((1 << part.L) - 1):
        mask = part.p0
        for i in range(part.L):
            if q_bits >> i & 1:
                mask |= part.parts[i]
        masks.append(mask)
    return from_absent_masks(part.m, masks)


def generate_truncated_nested(part: Partition, t: int) -> PicInstance:
    """Perfectly nested family truncated to index sets with ``|Q| <= t``."""
    _check_m(part.m)
    if not 0 <= t <= part.L - 1:
        raise TOutOfRange(f"t={t} not in 0..{part.L - 1}")
    masks = []
    for q_bits in range(1 << part.L):
        if q_bits.bit_count() > t:
            continue
        mask = part.p0
        for i in range(part.L):
            if q_bits >> i & 1:
                mask |= part.parts[i]
        masks.append(mask)
    return from_absent_masks(part.m, masks)


def generate_slightly_imperfect(
    part: Partition, q_indices: Iterable[int], htilde: Iterable[int]
) -> PicInstance:
    """Perfectly nested family with one member ``H_Q`` replaced by a strict
    subset of it that is not itself a nested set."""
    _check_m(part.m)
    q = frozenset(q_indices)
    if not q <= frozenset(range(1, part.L + 1)) or len(q) == part.L:
        raise QNotProper(f"Q={sorted(q)} is not a proper subset of 1..{part.L}")
    replaced = part.nested_set(q)
    ht = bitset.mask_of(htilde, part.m)
    if not bitset.is_strict_subset(ht, replaced):
        raise HtildeNotStrictSubset(
            f"{list(bitset.indices_of(ht))} is not a strict subset of "
            f"{list(bitset.indices_of(replaced))}"
        )
    perfect = set(generate_perfectly_nested(part).absent)
    if ht in perfect:
        raise HtildeNotStrictSubset(
            "replacement set coincides with another nested absent set"
        )
    perfect.remove(replaced)
    perfect.add(ht)
    return from_absent_masks(part.m, perfect)


def random_instance(
    m: int, rng: random.Random, max_absent: int | None = None
) -> PicInstance:
    """A uniformly sized random absent family (explicit RNG, no hidden entropy)."""
    _check_m(m)
    cap = bitset.full_mask(m)  # number of proper subsets, 2^m - 1
    if max_absent is not None:
        cap = min(cap, max_absent)
    k = rng.randint(0, cap)
    masks = rng.sample(range(bitset.full_mask(m)), k)
    return from_absent_masks(m, masks)


# --- JSON documents ---


def parse_instance(text: str) -> PicInstance:
    """Parse an instance JSON document (absent or present form)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceSyntaxError("instance document must be a JSON object")
    if "m" not in doc:
        raise InstanceSyntaxError('missing "m"')
    m = doc["m"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise InstanceSyntaxError('"m" must be an integer')
    keys = [k for k in ("absent", "present") if k in doc]
    if len(keys) != 1:
        raise InstanceSyntaxError(
            'exactly one of "absent" or "present" must be given'
        )
    extra = set(doc) - {"m", keys[0]}
    if extra:
        raise InstanceSyntaxError(f"unexpected keys: {sorted(extra)}")
    fam = doc[keys[0]]
    if not isinstance(fam, list) or not all(isinstance(h, list) for h in fam):
        raise InstanceSyntaxError(f'"{keys[0]}" must be a list of lists')
    for h in fam:
        for i in h:
            if not isinstance(i, int) or isinstance(i, bool):
                raise InstanceSyntaxError(f"message index {i!r} is not an integer")
    if keys[0] == "absent":
        return from_absent(m, fam)
    return from_present(m, fam)


def serialize_instance(inst: PicInstance, pretty: bool = False) -> str:
    """Canonical JSON for an instance (absent form, file ordering)."""
    fam = sorted((bitset.file_key(h)[1] for h in inst.absent), key=lambda t: (len(t), t))
    doc = {"m": inst.m, "absent": [list(t) for t in fam]}
    if pretty:
        return json.dumps(doc, indent=2)
    return json.dumps(doc, separators=(",", ":"))
