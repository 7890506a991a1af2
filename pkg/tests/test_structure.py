"""Nested chains, breakability, and look-ahead skip analysis."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plic import (
    INAPPLICABLE,
    MINIMAL_COVER,
    NOT_COVER,
    BreakWitness,
    NestedChain,
    bitset,
    from_absent,
    from_absent_masks,
    is_l_chain_breakable,
    longest_chain_above,
    longest_nested_chain,
    look_ahead_applicable,
    look_ahead_skip,
    smallest_breakable_bound,
    structural_lower_bound,
)
from plic.errors import ANotAbsent, LOutOfRange, PreconditionViolated

from oracles import (
    brute_breakable,
    brute_chain_above,
    brute_longest_chain,
    mask_of,
)


def masks(inst, *families):
    return tuple(mask_of(f, inst.m) for f in families)


# --- longest nested chain ---


def test_longest_chain_ex1(pair3):
    l_max, chain = longest_nested_chain(pair3)
    assert l_max == 2
    assert chain.sets == (0b100, 0b101)  # {3} inside {1,3}
    assert chain.length == 2


def test_longest_chain_p1(p1):
    l_max, chain = longest_nested_chain(p1)
    assert l_max == 2
    # canonically least witness: {1,2} inside {1,2,4}
    assert chain.sets == masks(p1, [1, 2], [1, 2, 4])


def test_longest_chain_p2(p2):
    l_max, chain = longest_nested_chain(p2)
    assert l_max == 2
    assert chain.sets == masks(p2, [3], [1, 2, 3, 4])


def test_longest_chain_no_absent():
    inst = from_absent(4, [])
    assert longest_nested_chain(inst) == (0, NestedChain(()))


def test_longest_chain_generators(nested7, truncated7, imperfect7):
    assert longest_nested_chain(nested7)[0] == 3
    assert longest_nested_chain(truncated7)[0] == 2
    assert longest_nested_chain(imperfect7)[0] == 3  # the empty set deepens a chain


def test_chain_above_p1(p1):
    assert longest_chain_above(p1, 0) == 2
    assert longest_chain_above(p1, mask_of([1, 3], p1.m)) == 2
    assert longest_chain_above(p1, mask_of([1, 2, 3], p1.m)) == 0
    assert longest_chain_above(p1, mask_of([1, 3, 4], p1.m)) == 0
    assert longest_chain_above(p1, mask_of([4], p1.m)) == 1


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_chain_lengths_match_brute_force(data):
    m = data.draw(st.integers(2, 5), label="m")
    fam = data.draw(st.sets(st.integers(0, 2**m - 2), max_size=8), label="absent")
    inst = from_absent_masks(m, fam)
    l_max, chain = longest_nested_chain(inst)
    assert l_max == brute_longest_chain(inst)
    assert chain.length == l_max
    for a, b in zip(chain.sets, chain.sets[1:]):
        assert bitset.is_strict_subset(a, b)
    assert all(inst.is_absent(h) for h in chain.sets)
    t = data.draw(st.integers(0, 2**m - 1), label="t")
    above = longest_chain_above(inst, t)
    assert above == max(
        (k for k in range(1, len(fam) + 1) if brute_chain_above(inst, t, k)),
        default=0,
    )
    # growing t can only shorten the chains above it
    t2 = t | data.draw(st.integers(0, 2**m - 1), label="extra")
    assert longest_chain_above(inst, t2) <= above


# --- breakability ---


def test_p1_two_chains_breakable(p1):
    breakable, witnesses = is_l_chain_breakable(p1, 2)
    assert breakable
    assert witnesses == (
        BreakWitness(masks(p1, [1, 2], [1, 2, 4]), 1, 3),
        BreakWitness(masks(p1, [1, 3], [1, 3, 5]), 1, 2),
    )
    for w in witnesses:
        hk = w.chain[w.k - 1]
        assert not hk >> (w.a - 1) & 1
        assert longest_chain_above(p1, hk | 1 << (w.a - 1)) < 2 - w.k


def test_p1_alternative_break_messages(p1):
    # other break messages exist; the reported one is just the least (k, a)
    assert longest_chain_above(p1, mask_of([1, 2, 3], p1.m)) == 0
    assert longest_chain_above(p1, mask_of([1, 3, 4], p1.m)) == 0


def test_p2_not_breakable(p2):
    assert is_l_chain_breakable(p2, 2) == (False, ())


def test_nothing_to_break_is_vacuously_breakable(sparse5):
    assert is_l_chain_breakable(sparse5, 2) == (True, ())


def test_breakable_length_range(p1):
    with pytest.raises(LOutOfRange):
        is_l_chain_breakable(p1, 1)
    with pytest.raises(LOutOfRange):
        is_l_chain_breakable(p1, p1.m)


def test_nested_families_are_unbreakable(nested7, truncated7):
    assert is_l_chain_breakable(nested7, 2)[0] is False
    assert is_l_chain_breakable(nested7, 3)[0] is False
    assert is_l_chain_breakable(truncated7, 2)[0] is False


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_breakability_matches_brute_force(data):
    m = data.draw(st.integers(3, 5), label="m")
    fam = data.draw(st.sets(st.integers(0, 2**m - 2), max_size=7), label="absent")
    inst = from_absent_masks(m, fam)
    length = data.draw(st.integers(2, m - 1), label="L")
    verdict, witnesses = is_l_chain_breakable(inst, length)
    assert verdict == brute_breakable(inst, length)
    for w in witnesses:
        assert 1 <= w.k < length
        hk = w.chain[w.k - 1]
        assert not brute_chain_above(inst, hk | 1 << (w.a - 1), length - w.k)


# --- combined lower bounds ---


def test_smallest_breakable_bound(p1, p2, nested5):
    assert smallest_breakable_bound(p1) == 4  # breakable at length 2
    assert smallest_breakable_bound(p2) is None
    assert smallest_breakable_bound(nested5) is None


def test_structural_lower_bound_values(p1, p2, nested7, truncated7, imperfect7):
    assert structural_lower_bound(p1) == 4  # sharpened past m - L_max = 3
    assert structural_lower_bound(p2) == 4
    assert structural_lower_bound(nested7) == 4
    assert structural_lower_bound(truncated7) == 5
    assert structural_lower_bound(imperfect7) == 4


def test_structural_lower_bound_no_absent():
    inst = from_absent(4, [])
    assert structural_lower_bound(inst) == 4


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_structural_bound_shape(data):
    m = data.draw(st.integers(2, 5), label="m")
    fam = data.draw(st.sets(st.integers(0, 2**m - 2), max_size=8), label="absent")
    inst = from_absent_masks(m, fam)
    l_max, _ = longest_nested_chain(inst)
    bound = structural_lower_bound(inst)
    assert bound >= m - l_max
    sharpened = smallest_breakable_bound(inst)
    if sharpened is None:
        assert bound == m - l_max
    else:
        assert bound == max(m - l_max, sharpened)


# --- look-ahead analysis ---


def test_not_cover_verdict(uncovered5):
    verdict = look_ahead_applicable(uncovered5, uncovered5.absent)
    assert verdict.kind == NOT_COVER
    assert verdict.s_witness is None


def test_not_cover_skip(uncovered5):
    fam = uncovered5.absent
    assert look_ahead_skip(uncovered5, fam, 0) == 5
    assert look_ahead_skip(uncovered5, fam, mask_of([3], 5)) == 5
    # a chain that already left the union gains nothing
    assert look_ahead_skip(uncovered5, fam, mask_of([5], 5)) is None


def test_minimal_cover_verdict(p2):
    fam = masks(p2, [1, 2, 3, 4], [3, 4, 5, 6])
    verdict = look_ahead_applicable(p2, fam)
    assert verdict.kind == MINIMAL_COVER
    assert verdict.s_witness == tuple(fam)
    assert verdict.intersection == mask_of([3, 4], p2.m)


def test_minimal_cover_skip(p2):
    fam = masks(p2, [1, 2, 3, 4], [3, 4, 5, 6])
    # chains inside either remainder can skip into a private region
    assert look_ahead_skip(p2, fam, mask_of([3], p2.m)) == 1
    # this chain is only contained in the first member's remainder
    assert look_ahead_skip(p2, fam, mask_of([1, 2], p2.m)) == 5
    # escaped both remainders: no safe skip remains
    assert look_ahead_skip(p2, fam, mask_of([1, 5], p2.m)) is None


def test_minimal_cover_with_empty_intersection():
    inst = from_absent(4, [[1, 2], [3, 4]])
    fam = masks(inst, [1, 2], [3, 4])
    verdict = look_ahead_applicable(inst, fam)
    # the two members are disjoint, and the empty set is a present receiver
    assert verdict.kind == MINIMAL_COVER
    assert verdict.intersection == 0
    assert look_ahead_skip(inst, fam, 0) == 1


def test_non_minimal_cover_is_inapplicable(nested7):
    assert look_ahead_applicable(nested7, nested7.absent).kind == INAPPLICABLE
    with pytest.raises(PreconditionViolated):
        look_ahead_skip(nested7, nested7.absent, 0)


def test_cover_with_absent_intersections_is_inapplicable():
    inst = from_absent(4, [[1, 2], [3, 4], []])
    fam = masks(inst, [1, 2], [3, 4])
    assert look_ahead_applicable(inst, fam).kind == INAPPLICABLE


def test_least_witness_subfamily(p2):
    # the full absent family is a non-minimal cover ({3} is redundant) --
    # drop to the two big members and the verdict reports them
    assert look_ahead_applicable(p2, p2.absent).kind == INAPPLICABLE


def test_family_members_must_be_absent(p2):
    with pytest.raises(ANotAbsent):
        look_ahead_applicable(p2, [mask_of([1], p2.m)])
    with pytest.raises(ANotAbsent):
        look_ahead_skip(p2, [mask_of([1], p2.m)], 0)


def test_empty_family_is_not_a_cover(p2):
    verdict = look_ahead_applicable(p2, [])
    assert verdict.kind == NOT_COVER
    assert look_ahead_skip(p2, [], 0) == 1


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_look_ahead_skip_is_sound(data):
    m = data.draw(st.integers(2, 5), label="m")
    fam = data.draw(
        st.sets(st.integers(0, 2**m - 2), min_size=1, max_size=6), label="absent"
    )
    inst = from_absent_masks(m, fam)
    sub = data.draw(
        st.sets(st.sampled_from(sorted(fam)), min_size=1), label="family"
    )
    verdict = look_ahead_applicable(inst, sub)
    if verdict.kind == INAPPLICABLE:
        with pytest.raises(PreconditionViolated):
            look_ahead_skip(inst, sub, 0)
        return
    skip = look_ahead_skip(inst, sub, 0)
    assert skip is not None  # the empty chain never escapes a union
    if verdict.kind == NOT_COVER:
        union = 0
        for h in sub:
            union |= h
        assert not union >> (skip - 1) & 1
    else:
        assert verdict.intersection is not None
        assert inst.is_present(verdict.intersection)
        # the skip lands in exactly one cover member's private region
        owners = [h for h in sub if h >> (skip - 1) & 1]
        assert len(owners) == 1
