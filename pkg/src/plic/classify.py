"""Exact-rate classification of instances by their absent family.

The solved families, in the order the cascade checks them:

1.  no absent receivers: rate ``m``;
2.  absent union misses a message: rate ``m - 1``;
3.  perfectly nested (all ``H_Q = P_0 u parts(Q)`` for proper ``Q``):
    rate ``m - L``;
4.  nesting truncated at level ``T`` (only ``|Q| <= T``): rate
    ``m - T - 1``;
5.  slightly imperfect (one nested set replaced by a strict subset):
    rate ``m - L + 1``;
6.  at most two absent sets: rate ``m - 1``;
7.  at most one nested pair with full union: rate ``m - 1``;
8.  exactly three absent sets: ``m - 2`` when perfectly 2-nested,
    else ``m - 1``;
9.  exactly four absent sets: ``m - 2`` when some three of them are
    perfectly 2-nested or all four are 1-truncated 3-nested, else
    ``m - 1``;
10. otherwise: bounds ``[structural lower, m - 1]``.

Whenever several families match the same instance they must agree on
the rate; ``classify`` checks that and raises ``TheoremViolation`` if
not, since disagreement would mean one of the closed forms is wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from . import bitset
from .errors import OracleBudgetExceeded, SearchSpaceTooLarge, TheoremViolation
from .instance import Partition, PicInstance, from_absent_masks
from .structure import structural_lower_bound

TAG_NO_ABSENT = "no-absent"
TAG_UNCOVERED = "uncovered-messages"
TAG_PERFECT = "perfectly-nested"
TAG_TRUNCATED = "truncated-nested"
TAG_SLIGHTLY_IMPERFECT = "slightly-imperfect"
TAG_TWO_ABSENT = "at-most-two-absent"
TAG_SPARSE_NESTING = "sparse-nesting"
TAG_THREE_ABSENT = "three-absent"
TAG_FOUR_ABSENT_NESTED_SUBSET = "four-absent-nested-subset"
TAG_FOUR_ABSENT = "four-absent"
TAG_BOUNDS_ONLY = "bounds-only"


@dataclass(frozen=True)
class RateResult:
    """Bounds on the optimal broadcast length, exact when they meet.

    For truncated families the exact value is attained over the prime
    field certified by the construction (not necessarily the binary
    field); every other solved family is field-independent.
    """

    m: int
    lower: int
    upper: int
    exact: bool
    provenance: str
    params: dict[str, Any] = field(default_factory=dict)


def _sorted_parts(parts: list[int]) -> tuple[int, ...]:
    return tuple(sorted(parts, key=lambda p: p & -p))


def _detect_perfect_family(m: int, fam: tuple[int, ...]) -> Partition | None:
    """Partition witnessing ``fam == {H_Q : Q proper}``, or None."""
    if not fam:
        return None
    maximal = [
        h for h in fam if not any(bitset.is_strict_subset(h, g) for g in fam)
    ]
    if len(fam) != (1 << len(maximal)) - 1:
        return None
    parts = []
    union = 0
    for h in maximal:
        p = bitset.complement(h, m)
        if p == 0 or union & p:
            return None
        union |= p
        parts.append(p)
    p0 = bitset.complement(union, m)
    part = Partition(m, p0, _sorted_parts(parts))
    regen = set()
    for q_bits in range((1 << part.L) - 1):
        mask = p0
        for i in range(part.L):
            if q_bits >> i & 1:
                mask |= part.parts[i]
        regen.add(mask)
    if regen != set(fam):
        return None
    return part


def _detect_truncated_family(
    m: int, fam: tuple[int, ...]
) -> tuple[Partition, int] | None:
    """Partition and level witnessing ``fam == {H_Q : |Q| <= T}``, or None."""
    if not fam:
        return None
    p0 = bitset.full_mask(m)
    for h in fam:
        p0 &= h
    if p0 not in fam:
        return None
    rest = [h for h in fam if h != p0]
    if not rest:
        # a single absent set is nesting truncated at level 0; complete
        # with the one-part partition
        return Partition(m, p0, (bitset.complement(p0, m),)), 0
    minimal = [
        h for h in rest if not any(bitset.is_strict_subset(g, h) for g in rest)
    ]
    parts = []
    union = p0
    for h in minimal:
        p = h & ~p0  # disjoint from p0 by construction
        if p == 0 or union & p:
            return None
        union |= p
        parts.append(p)
    if union != bitset.full_mask(m):
        return None
    part = Partition(m, p0, _sorted_parts(parts))
    level = 0
    for h in fam:
        q_size = 0
        mask = p0
        for p in part.parts:
            if bitset.is_subset(p, h):
                mask |= p
                q_size += 1
        if mask != h:
            return None
        level = max(level, q_size)
    # the family must contain every H_Q up to the level, nothing else
    expected = set()
    for q_bits in range(1 << part.L):
        if q_bits.bit_count() > level:
            continue
        mask = p0
        for i in range(part.L):
            if q_bits >> i & 1:
                mask |= part.parts[i]
        expected.add(mask)
    if expected != set(fam):
        return None
    return part, level


def detect_perfectly_nested(inst: PicInstance) -> Partition | None:
    return _detect_perfect_family(inst.m, inst.absent)


def detect_truncated_nested(inst: PicInstance) -> tuple[Partition, int] | None:
    return _detect_truncated_family(inst.m, inst.absent)


def detect_slightly_imperfect(
    inst: PicInstance,
) -> tuple[Partition, frozenset[int], int] | None:
    """Witness ``(partition, Q, htilde)`` that the absent family is a
    perfectly nested one (with at least two parts) whose member ``H_Q``
    was replaced by the strict subset ``htilde``.

    Single-part families are excluded: replacing the only nested set
    leaves a plain one-absent instance, which belongs to the
    ``m - 1`` families instead.
    """
    n = len(inst.absent)
    if n < 3 or n & (n + 1):  # need 2^L - 1 members, L >= 2
        return None
    for htilde in inst.absent:
        rest = [h for h in inst.absent if h != htilde]
        for h in sorted(bitset.iter_supersets(htilde, inst.m), key=bitset.canon_key):
            if inst.is_absent(h):
                continue
            part = _detect_perfect_family(
                inst.m, bitset.sort_canonical(rest + [h])
            )
            if part is not None and part.L >= 2:
                q = frozenset(
                    i + 1
                    for i, p in enumerate(part.parts)
                    if bitset.is_subset(p, h)
                )
                return part, q, htilde
    return None


def count_nested_pairs(inst: PicInstance) -> int:
    """Ordered inclusions ``H c H'`` within the absent family."""
    return sum(
        1
        for a, b in combinations(inst.absent, 2)
        if bitset.is_strict_subset(a, b) or bitset.is_strict_subset(b, a)
    )


def _two_nested_subfamily(m: int, fam: tuple[int, ...]) -> Partition | None:
    """A perfectly 2-nested triple within ``fam``, if any (canonical first)."""
    for triple in combinations(fam, 3):
        part = _detect_perfect_family(m, bitset.sort_canonical(triple))
        if part is not None and part.L == 2:
            return part
    return None


def classify(inst: PicInstance) -> RateResult:
    """Best known bounds, exact whenever a solved family matches.

    Every matching family contributes; they must agree on the rate.
    The first match in cascade order names the provenance.
    """
    m = inst.m
    if not inst.absent:
        return RateResult(m, m, m, True, TAG_NO_ABSENT)
    matches: list[tuple[str, int, dict[str, Any]]] = []
    if inst.absent_union != inst.full:
        missing = bitset.indices_of(bitset.complement(inst.absent_union, m))
        matches.append((TAG_UNCOVERED, m - 1, {"missing": missing}))
    perfect = detect_perfectly_nested(inst)
    if perfect is not None:
        matches.append((TAG_PERFECT, m - perfect.L, {"partition": perfect}))
    truncated = detect_truncated_nested(inst)
    if truncated is not None:
        part, level = truncated
        matches.append(
            (TAG_TRUNCATED, m - level - 1, {"partition": part, "t": level})
        )
    imperfect = detect_slightly_imperfect(inst)
    if imperfect is not None:
        part, q, htilde = imperfect
        matches.append(
            (
                TAG_SLIGHTLY_IMPERFECT,
                m - part.L + 1,
                {"partition": part, "q_indices": q, "htilde": htilde},
            )
        )
    if len(inst.absent) <= 2:
        matches.append((TAG_TWO_ABSENT, m - 1, {}))
    pairs = count_nested_pairs(inst)
    if inst.absent_union == inst.full and pairs <= 1:
        matches.append((TAG_SPARSE_NESTING, m - 1, {"nested_pairs": pairs}))
    if len(inst.absent) == 3:
        rate = m - 2 if perfect is not None else m - 1
        matches.append((TAG_THREE_ABSENT, rate, {}))
    if len(inst.absent) == 4:
        subset = _two_nested_subfamily(m, inst.absent)
        if subset is not None:
            matches.append(
                (TAG_FOUR_ABSENT_NESTED_SUBSET, m - 2, {"partition": subset})
            )
        else:
            rate = m - 2 if truncated is not None and truncated[1] == 1 else m - 1
            matches.append((TAG_FOUR_ABSENT, rate, {}))
    if matches:
        rates = {rate for _, rate, _ in matches}
        if len(rates) != 1:
            raise TheoremViolation(
                f"solved families disagree on {inst}: "
                + ", ".join(f"{t}={r}" for t, r, _ in matches)
            )
        provenance, rate, params = matches[0]
        return RateResult(m, rate, rate, True, provenance, params)
    lower = structural_lower_bound(inst)
    return RateResult(
        m,
        lower,
        m - 1,
        lower == m - 1,
        TAG_BOUNDS_ONLY,
        {"structural_lower": lower},
    )


@dataclass(frozen=True)
class CriticalityReport:
    """Oracle rates after restoring each absent receiver one at a time."""

    q: int
    base_rate: int
    restored: tuple[tuple[int, int], ...]
    critical: bool


def criticality_probe(inst: PicInstance, q: int = 2) -> CriticalityReport:
    """Does every absent receiver matter?  Restore each one (make it
    present) and compare oracle rates; critical means each restoration
    strictly raises the rate."""
    from .oracle import exact_linear_rate  # local import, avoids a cycle

    try:
        base = exact_linear_rate(inst, q).rate
        restored = []
        critical = True
        for h in inst.absent:
            sub = from_absent_masks(inst.m, (g for g in inst.absent if g != h))
            rate = exact_linear_rate(sub, q).rate
            restored.append((h, rate))
            if rate <= base:
                critical = False
    except SearchSpaceTooLarge as exc:
        raise OracleBudgetExceeded(str(exc)) from exc
    return CriticalityReport(q, base, tuple(restored), critical)
