"""Instance model: constructors, partitions, generators, JSON round-trips."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plic import (
    from_absent,
    from_absent_masks,
    from_present,
    generate_perfectly_nested,
    generate_slightly_imperfect,
    generate_truncated_nested,
    parse_instance,
    partition,
    random_instance,
    serialize_instance,
)
from plic.errors import (
    DuplicateReceiver,
    FullSetListed,
    HtildeNotStrictSubset,
    InstanceSemanticError,
    InstanceSyntaxError,
    InvalidInstance,
    InvalidPartition,
    MessageIndexOutOfRange,
    QNotProper,
    TOutOfRange,
)
from plic.instance import M_MAX, M_MIN

from oracles import mask_of


# --- basic model ---


def test_instance_fields(pair3):
    assert pair3.m == 3
    assert pair3.full == 0b111
    assert pair3.absent == (0b100, 0b101)  # canonical: by (popcount, value)
    assert pair3.absent_sets() == ((3,), (1, 3))
    assert pair3.absent_union == 0b101


def test_present_is_complement(pair3):
    # every proper subset of [1:3] except the two absent ones
    assert set(pair3.present) == set(range(7)) - {0b100, 0b101}
    assert len(pair3.present) + len(pair3.absent) == 2**pair3.m - 1


def test_present_canonical_order(trace6):
    keys = [(h.bit_count(), h) for h in trace6.present]
    assert keys == sorted(keys)


def test_membership_predicates(pair3):
    assert pair3.is_absent(0b100)
    assert not pair3.is_absent(0b011)
    assert pair3.is_present(0b011)
    assert pair3.is_present(0)  # empty side information is a receiver too
    assert not pair3.is_present(0b100)
    assert not pair3.is_present(pair3.full)  # the full set is never a receiver
    assert not pair3.is_present(-1)


def test_no_absent_instance():
    inst = from_absent(3, [])
    assert inst.absent == ()
    assert len(inst.present) == 7


def test_all_proper_subsets_absent():
    # even the empty set can be absent; nobody is left to serve
    inst = from_absent_masks(2, range(3))
    assert inst.present == ()
    assert inst.is_absent(0)


# --- constructors and validation ---


@pytest.mark.parametrize("bad_m", [1, 0, -3, M_MAX + 1, True, "4", 3.0])
def test_bad_message_count(bad_m):
    with pytest.raises(InvalidInstance):
        from_absent(bad_m, [])


def test_m_bounds_are_inclusive():
    from_absent(M_MIN, [])
    from_absent(M_MAX, [[1, M_MAX]])


def test_duplicate_receiver_rejected():
    with pytest.raises(DuplicateReceiver):
        from_absent(4, [[1, 2], [2, 1]])
    with pytest.raises(DuplicateReceiver):
        from_present(4, [[3], [3]])


def test_full_set_rejected():
    with pytest.raises(FullSetListed):
        from_absent(3, [[1, 2, 3]])
    with pytest.raises(FullSetListed):
        from_present(3, [[1, 2, 3]])


def test_index_out_of_range():
    with pytest.raises(MessageIndexOutOfRange):
        from_absent(3, [[4]])
    with pytest.raises(MessageIndexOutOfRange):
        from_absent(3, [[0]])
    with pytest.raises(MessageIndexOutOfRange):
        from_absent(3, [[True]])  # bools are not message indices


def test_bad_mask_rejected():
    with pytest.raises(InstanceSemanticError):
        from_absent_masks(3, [0b1000])
    with pytest.raises(InstanceSemanticError):
        from_absent_masks(3, [-1])


def test_from_present_matches_complement(p1):
    rebuilt = from_present(p1.m, [list(h) for h in _present_sets(p1)])
    assert rebuilt == p1


def test_from_present_size_cap():
    with pytest.raises(InstanceSemanticError):
        from_present(17, [[1]])


def _present_sets(inst):
    from plic import bitset

    return [bitset.indices_of(h) for h in inst.present]


# --- partitions ---


def test_partition_basics(part7):
    assert part7.m == 7
    assert part7.L == 3
    assert part7.p0 == 0b0000001
    assert part7.parts == (0b0000110, 0b0011000, 0b1100000)


def test_nested_set(part7):
    assert part7.nested_set([]) == part7.p0
    assert part7.nested_set([1, 3]) == 0b1100111
    with pytest.raises(QNotProper):
        part7.nested_set([4])
    with pytest.raises(QNotProper):
        part7.nested_set([0])


def test_partition_empty_p0_allowed():
    part = partition(4, [], [[1, 2], [3, 4]])
    assert part.p0 == 0
    assert part.L == 2


@pytest.mark.parametrize(
    "p0,parts",
    [
        ([1], []),  # no parts at all
        ([1], [[2], []]),  # an empty part
        ([1], [[1, 2], [3, 4]]),  # overlap with P_0
        ([1], [[2, 3], [3, 4]]),  # overlap between parts
        ([1], [[2], [3]]),  # does not cover [1:4]
    ],
)
def test_invalid_partitions(p0, parts):
    with pytest.raises(InvalidPartition):
        partition(4, p0, parts)


# --- structured generators ---


def test_perfectly_nested_family_size(part7, nested7):
    assert len(nested7.absent) == 2**part7.L - 1
    # every member is P_0 plus a union of parts, and P_0 itself is there
    assert part7.p0 in nested7.absent
    assert part7.nested_set([1, 2]) in nested7.absent
    assert part7.nested_set([1, 2, 3]) not in nested7.absent  # would be [1:m]


def test_truncated_family_size(part7, truncated7):
    # |Q| <= 1: the empty set plus the three singletons
    assert len(truncated7.absent) == 4
    assert set(truncated7.absent) == {
        part7.p0,
        part7.nested_set([1]),
        part7.nested_set([2]),
        part7.nested_set([3]),
    }


def test_truncation_at_top_is_perfect(part7, nested7):
    assert generate_truncated_nested(part7, part7.L - 1) == nested7


def test_truncation_level_bounds(part7):
    with pytest.raises(TOutOfRange):
        generate_truncated_nested(part7, -1)
    with pytest.raises(TOutOfRange):
        generate_truncated_nested(part7, part7.L)


def test_slightly_imperfect_replaces_one_member(part7, nested7, imperfect7):
    # Q = {} replaces P_0 itself; H-tilde = {} is a strict subset of P_0
    assert len(imperfect7.absent) == len(nested7.absent)
    assert part7.p0 not in imperfect7.absent
    assert 0 in imperfect7.absent
    assert set(imperfect7.absent) - {0} == set(nested7.absent) - {part7.p0}


def test_slightly_imperfect_validation(part7):
    with pytest.raises(QNotProper):
        generate_slightly_imperfect(part7, [1, 2, 3], [1])
    with pytest.raises(HtildeNotStrictSubset):
        generate_slightly_imperfect(part7, [1], [1, 2, 3])  # equals H_Q
    with pytest.raises(HtildeNotStrictSubset):
        generate_slightly_imperfect(part7, [1], [5])  # not a subset at all
    with pytest.raises(HtildeNotStrictSubset):
        generate_slightly_imperfect(part7, [1], [1])  # collides with H_{} = P_0


def test_generators_at_minimum_size():
    # m = 2, empty P_0: the nested family is every proper subset, and no
    # receivers remain
    part = partition(2, [], [[1], [2]])
    inst = generate_perfectly_nested(part)
    assert set(inst.absent) == {0, 0b01, 0b10}
    assert inst.present == ()


def test_example2_instance(trace6):
    assert trace6.m == 6
    assert trace6.absent_sets() == ((1, 2), (4, 5), (1, 2, 3, 4))


# --- randomness is caller-controlled ---


def test_random_instance_deterministic():
    a = random_instance(5, random.Random(7))
    b = random_instance(5, random.Random(7))
    assert a == b
    assert a.m == 5


def test_random_instance_respects_cap():
    for seed in range(20):
        inst = random_instance(6, random.Random(seed), max_absent=3)
        assert len(inst.absent) <= 3


# --- JSON documents ---


def test_parse_absent_form():
    inst = parse_instance('{"m": 3, "absent": [[3], [1, 3]]}')
    assert inst == from_absent(3, [[3], [1, 3]])


def test_parse_present_form():
    inst = parse_instance('{"m": 2, "present": [[], [1], [2]]}')
    assert inst.absent == ()


def test_serialize_file_order(p2):
    doc = json.loads(serialize_instance(p2))
    assert doc == {"m": 6, "absent": [[3], [1, 2, 3, 4], [3, 4, 5, 6]]}
    # shorter sets first, then lexicographic by index list
    fams = doc["absent"]
    assert fams == sorted(fams, key=lambda h: (len(h), h))


def test_serialize_pretty_is_same_document(p1):
    compact = json.loads(serialize_instance(p1))
    pretty = json.loads(serialize_instance(p1, pretty=True))
    assert compact == pretty
    assert "\n" in serialize_instance(p1, pretty=True)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"absent": []}',
        '{"m": true, "absent": []}',
        '{"m": 3}',
        '{"m": 3, "absent": [], "present": []}',
        '{"m": 3, "absent": [], "extra": 1}',
        '{"m": 3, "absent": [3]}',
        '{"m": 3, "absent": [["a"]]}',
        '{"m": 3, "absent": [[1.5]]}',
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(InstanceSyntaxError):
        parse_instance(text)


def test_parse_rejects_semantic_errors():
    with pytest.raises(MessageIndexOutOfRange):
        parse_instance('{"m": 3, "absent": [[7]]}')
    with pytest.raises(DuplicateReceiver):
        parse_instance('{"m": 3, "absent": [[1], [1]]}')
    with pytest.raises(FullSetListed):
        parse_instance('{"m": 3, "absent": [[1, 2, 3]]}')
    with pytest.raises(InvalidInstance):
        parse_instance('{"m": 1, "absent": []}')


# --- properties ---


@st.composite
def instances(draw, max_m=6):
    m = draw(st.integers(M_MIN, max_m))
    fam = draw(st.sets(st.integers(0, 2**m - 2), max_size=2**m - 1))
    return from_absent_masks(m, fam)


@given(instances())
@settings(max_examples=120, deadline=None)
def test_serialize_parse_round_trip(inst):
    assert parse_instance(serialize_instance(inst)) == inst
    assert parse_instance(serialize_instance(inst, pretty=True)) == inst


@given(instances(max_m=5))
@settings(max_examples=80, deadline=None)
def test_absent_present_split(inst):
    present = set(inst.present)
    absent = set(inst.absent)
    assert present.isdisjoint(absent)
    assert present | absent == set(range(2**inst.m - 1))


@given(instances(max_m=5))
@settings(max_examples=80, deadline=None)
def test_present_form_round_trip(inst):
    from plic import bitset

    rebuilt = from_present(
        inst.m, [list(bitset.indices_of(h)) for h in inst.present]
    )
    assert rebuilt == inst


def test_mask_helper_agrees_with_package():
    from plic import bitset

    assert bitset.mask_of([1, 3], 3) == mask_of([1, 3], 3) == 0b101
