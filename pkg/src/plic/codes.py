"""Linear broadcast codes: constructions, serialization, verification.

A code is an ``ell x m`` matrix over a prime field; the sender
broadcasts the matrix times the message vector.  Receiver ``H`` is
satisfied when some unit vector ``e_j`` with ``j`` outside ``H`` lies in
the row space of the code rows together with ``{e_i : i in H}`` -- that
is exactly when ``X_j`` is a deterministic function of the broadcast
and the side information.

The constructions mirror the exact-rate families:

* uncoded rows for one absent set plus a cyclic chain over the rest
  (length ``m - 1``);
* uncoded ``P_0`` plus one cyclic chain per part for perfectly nested
  families (length ``m - L``);
* the same plus one extra uncoded message for slightly imperfect
  families (length ``m - L + 1``);
* for truncated families, extra mixing rows whose coefficients are
  powers of a primitive root, over the smallest prime field the
  verifier accepts (length ``m - T - 1``).
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import bitset
from .classify import (
    RateResult,
    TAG_BOUNDS_ONLY,
    TAG_FOUR_ABSENT,
    TAG_FOUR_ABSENT_NESTED_SUBSET,
    TAG_NO_ABSENT,
    TAG_PERFECT,
    TAG_SLIGHTLY_IMPERFECT,
    TAG_SPARSE_NESTING,
    TAG_THREE_ABSENT,
    TAG_TRUNCATED,
    TAG_TWO_ABSENT,
    TAG_UNCOVERED,
)
from .errors import (
    DimensionMismatch,
    DuplicateIndex,
    FieldSearchExhausted,
    HNotAbsent,
    InstanceSyntaxError,
    KInQ,
    NoSchemeForProvenance,
    TheoremViolation,
)
from .fields import PrimeField, in_span, is_prime, prime_field, rref
from .instance import Partition, PicInstance, generate_truncated_nested

GF2 = prime_field(2)

FIELD_SEARCH_CAP = 211


@dataclass(frozen=True)
class CodeMatrix:
    field: PrimeField
    m: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.rows)

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.length, self.m)


def _unit(j: int, m: int) -> tuple[int, ...]:
    return tuple(1 if i == j - 1 else 0 for i in range(m))


def _code(field: PrimeField, m: int, rows: Iterable[Sequence[int]]) -> CodeMatrix:
    return CodeMatrix(
        field, m, tuple(tuple(int(x) % field.q for x in row) for row in rows)
    )


def cyclic_code(messages: Sequence[int], m: int, field: PrimeField = GF2) -> CodeMatrix:
    """Rows ``X_i + X_{i+1}`` along an ordered message list.

    A single message (or none) yields the empty code: with all but one
    chain element known the remaining one follows, and there is nothing
    to say about a lone message.
    """
    seen = set()
    for i in messages:
        bitset.mask_of([i], m)  # range check
        if i in seen:
            raise DuplicateIndex(f"message {i} repeats in cyclic ordering")
        seen.add(i)
    rows = []
    for a, b in zip(messages, messages[1:]):
        row = [0] * m
        row[a - 1] = 1
        row[b - 1] = 1
        rows.append(row)
    return _code(field, m, rows)


def scheme_uncoded_plus_cyclic(
    inst: PicInstance, h: int, field: PrimeField = GF2
) -> CodeMatrix:
    """Send one absent set uncoded, the remaining messages as a chain."""
    if not inst.is_absent(h):
        raise HNotAbsent(
            f"{list(bitset.indices_of(h))} is not an absent receiver"
        )
    rows = [_unit(i, inst.m) for i in bitset.indices_of(h)]
    rows.extend(
        cyclic_code(bitset.indices_of(bitset.complement(h, inst.m)), inst.m, field).rows
    )
    return _code(field, inst.m, rows)


def _nested_rows(part: Partition, field: PrimeField) -> list[tuple[int, ...]]:
    rows = [_unit(i, part.m) for i in bitset.indices_of(part.p0)]
    for p in part.parts:
        rows.extend(cyclic_code(bitset.indices_of(p), part.m, field).rows)
    return rows


def scheme_perfectly_nested(part: Partition, field: PrimeField = GF2) -> CodeMatrix:
    """Uncoded ``P_0`` plus one cyclic chain per part (length ``m - L``)."""
    return _code(field, part.m, _nested_rows(part, field))


def scheme_slightly_imperfect(
    part: Partition,
    q_indices: Iterable[int],
    k: int,
    field: PrimeField = GF2,
) -> CodeMatrix:
    """Perfectly nested rows plus one uncoded message from part ``k``.

    ``k`` must index a part outside the replaced set's index set ``Q``.
    """
    q = frozenset(q_indices)
    if not 1 <= k <= part.L or k in q:
        raise KInQ(f"k={k} must index a part in 1..{part.L} outside Q={sorted(q)}")
    rows = _nested_rows(part, field)
    extra = min(bitset.indices_of(part.parts[k - 1]))
    rows.append(_unit(extra, part.m))
    return _code(field, part.m, rows)


def _truncated_rows(part: Partition, t: int, field: PrimeField) -> list[tuple[int, ...]]:
    rows = _nested_rows(part, field)
    leads = [min(bitset.indices_of(p)) for p in part.parts]
    for k in range(1, part.L - t):  # mixing rows V_{L-1} down to V_{t+1}
        row = [0] * part.m
        for i in range(1, part.L + 1):
            row[leads[i - 1] - 1] = pow(field.gamma, (k - 1) * i, field.q)
        rows.append(row)
    return rows


def scheme_truncated(
    part: Partition, t: int, max_prime: int = FIELD_SEARCH_CAP
) -> tuple[CodeMatrix, PrimeField]:
    """Truncated-family code over the least prime field that verifies.

    The mixing rows need enough distinct powers of the primitive root;
    rather than bound the field size in closed form, try primes in
    order and let the verifier arbitrate.
    """
    inst = generate_truncated_nested(part, t)
    q = 2
    while q <= max_prime:
        if is_prime(q):
            field = prime_field(q)
            code = _code(field, part.m, _truncated_rows(part, t, field))
            if verify_code(inst, code).ok:
                return code, field
        q += 1
    raise FieldSearchExhausted(
        f"no prime field up to {max_prime} verifies the truncated scheme"
    )


# --- verification ---


@dataclass(frozen=True)
class ReceiverReport:
    receiver: int
    decodable: tuple[int, ...]


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    receivers: tuple[ReceiverReport, ...]

    @property
    def unsatisfied(self) -> tuple[int, ...]:
        return tuple(r.receiver for r in self.receivers if not r.decodable)


def verify_code(inst: PicInstance, code: CodeMatrix) -> VerifyReport:
    """Check every present receiver can decode a new message, and which."""
    if code.m != inst.m:
        raise DimensionMismatch(
            f"code is {code.length}x{code.m}, instance has m={inst.m}"
        )
    q = code.field.q
    base = code.to_array()
    eye = np.eye(inst.m, dtype=np.int64)
    reports = []
    ok = True
    for h in inst.present:
        side = bitset.indices_of(h)
        stack = np.vstack([base] + [eye[i - 1 : i] for i in side]) if side else base
        reduced, pivots = rref(stack, q)
        decodable = tuple(
            j
            for j in range(1, inst.m + 1)
            if not h >> (j - 1) & 1 and in_span(reduced, pivots, eye[j - 1], q)
        )
        if not decodable:
            ok = False
        reports.append(ReceiverReport(h, decodable))
    return VerifyReport(ok, tuple(reports))


# --- dispatch from a classification ---

_FALLBACK_TAGS = frozenset(
    {
        TAG_UNCOVERED,
        TAG_TWO_ABSENT,
        TAG_SPARSE_NESTING,
        TAG_THREE_ABSENT,
        TAG_FOUR_ABSENT,
        TAG_BOUNDS_ONLY,
    }
)


def construct_for(inst: PicInstance, classification: RateResult) -> CodeMatrix:
    """Build a code matching the classification's upper bound.

    Solved families get their dedicated scheme; everything else falls
    back to the uncoded-plus-cyclic code over the canonically first
    absent set (length ``m - 1``).
    """
    tag = classification.provenance
    params = classification.params
    if tag == TAG_NO_ABSENT:
        code = _code(GF2, inst.m, [_unit(j, inst.m) for j in range(1, inst.m + 1)])
    elif tag == TAG_PERFECT:
        code = scheme_perfectly_nested(params["partition"])
    elif tag == TAG_TRUNCATED:
        code, _ = scheme_truncated(params["partition"], params["t"])
    elif tag == TAG_SLIGHTLY_IMPERFECT:
        part = params["partition"]
        q_indices = params["q_indices"]
        k = min(i for i in range(1, part.L + 1) if i not in q_indices)
        code = scheme_slightly_imperfect(part, q_indices, k)
    elif tag == TAG_FOUR_ABSENT_NESTED_SUBSET:
        code = scheme_perfectly_nested(params["partition"])
    elif tag in _FALLBACK_TAGS:
        code = scheme_uncoded_plus_cyclic(inst, inst.absent[0])
    else:
        raise NoSchemeForProvenance(f"unknown classification tag {tag!r}")
    if code.length != classification.upper:
        raise TheoremViolation(
            f"construction length {code.length} != upper bound "
            f"{classification.upper} for tag {tag!r}"
        )
    return code


# --- JSON documents ---


def serialize_code(code: CodeMatrix, pretty: bool = False) -> str:
    doc = {"q": code.field.q, "rows": [list(row) for row in code.rows]}
    if pretty:
        return json.dumps(doc, indent=2)
    return json.dumps(doc, separators=(",", ":"))


def parse_code(text: str, m: int | None = None) -> CodeMatrix:
    """Parse a code document ``{"q": ..., "rows": [[...], ...]}``.

    ``m`` disambiguates the width of an empty code.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) - {"q", "rows", "m"}:
        raise InstanceSyntaxError('code document must have keys "q" and "rows"')
    if "q" not in doc or "rows" not in doc:
        raise InstanceSyntaxError('code document must have keys "q" and "rows"')
    q = doc["q"]
    if not isinstance(q, int) or isinstance(q, bool) or not is_prime(q):
        raise InstanceSyntaxError('"q" must be a prime integer')
    rows = doc["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InstanceSyntaxError('"rows" must be a list of lists')
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InstanceSyntaxError("rows must all have the same width")
    width = widths.pop() if widths else (doc.get("m") if m is None else m)
    if width is None or not isinstance(width, int):
        raise InstanceSyntaxError("cannot infer message count for an empty code")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < q:
                raise InstanceSyntaxError(f"entry {x!r} not in 0..{q - 1}")
    return CodeMatrix(prime_field(q), width, tuple(tuple(r) for r in rows))
