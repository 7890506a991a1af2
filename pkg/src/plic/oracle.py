"""Brute-force rate oracles and the consistency cross-check.

``exact_linear_rate`` enumerates, for each length ell in increasing
order, every ell-dimensional subspace of F_q^m exactly once via its
reduced-row-echelon basis (pivot columns in lexicographic order, free
entries in odometer order) and returns the first length at which some
subspace satisfies every present receiver.  Satisfaction masks per
subspace are cached per (m, q, ell), so sweeping many instances of the
same size costs one enumeration.

``exact_general_rate`` drops linearity: it enumerates every encoder
table F_q^m -> F_q^ell and checks functional decodability (some new
message is a deterministic function of the broadcast word and the side
information).  Feasible only at toy sizes; that is its purpose --
an independent check below the linear oracle.

``crosscheck`` ties everything together on one instance:

    structural lower  <=  classify.lower  <=  linear oracle
        <=  classify.upper  ==  constructed code length (verified)

with equality throughout when the classification is exact, and
``m - l_star <= oracle`` when the chain bound is affordable.  Any
violation raises ``TheoremViolation``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import bitset
from ._kernels import general_scan, gf2_satisfaction
from .chain import l_star
from .classify import (
    RateResult,
    TAG_TRUNCATED,
    classify,
)
from .codes import CodeMatrix, construct_for, verify_code
from .errors import PicError, SearchSpaceTooLarge, TheoremViolation
from .fields import in_span, is_prime, prime_field, rref
from .instance import PicInstance
from .structure import longest_nested_chain, structural_lower_bound

GENERAL_GUARD_DEFAULT = 1 << 22


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if not 0 <= k <= m:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(m: int, q: int) -> int:
    """Total subspaces of F_q^m over all dimensions."""
    return sum(gaussian_binomial(m, k, q) for k in range(m + 1))


@dataclass(frozen=True)
class OracleResult:
    rate: int
    q: int
    witness: object
    search_space: int


@dataclass(frozen=True)
class EncoderTable:
    """A (possibly nonlinear) encoder: input word index -> output word index.

    Words are integers with base-q digits, message ``i`` at digit
    ``i - 1``; outputs range over ``q ** length``.
    """

    q: int
    m: int
    length: int
    outputs: tuple[int, ...]


def _check_linear_guard(m: int, q: int) -> None:
    if not is_prime(q):
        raise PicError(f"q={q} is not prime")
    if q == 2:
        if m <= 7:
            return
    elif q <= 5 and m <= 5:
        return
    raise SearchSpaceTooLarge(
        f"subspace enumeration for m={m}, q={q} is out of reach "
        f"({subspace_count(m, q)} subspaces)"
    )


def _iter_rref_bases(m: int, ell: int, q: int):
    """All RREF bases of ell-dimensional subspaces, canonical order."""
    if ell == 0:
        yield np.zeros((0, m), np.int64)
        return
    for pivots in combinations(range(m), ell):
        pivot_set = set(pivots)
        free = [
            (r, c)
            for r in range(ell)
            for c in range(m)
            if c > pivots[r] and c not in pivot_set
        ]
        base = np.zeros((ell, m), np.int64)
        for r, c in enumerate(pivots):
            base[r, c] = 1
        for fill in product(range(q), repeat=len(free)):
            mat = base.copy()
            for (r, c), v in zip(free, fill):
                mat[r, c] = v
            yield mat


_SAT_CACHE: dict[tuple[int, int, int], tuple[list[np.ndarray], np.ndarray]] = {}


def _sat_table(m: int, q: int, ell: int) -> tuple[list[np.ndarray], np.ndarray]:
    """(bases, sat) with sat[s, h] = 1 iff receiver mask h is satisfied."""
    key = (m, q, ell)
    cached = _SAT_CACHE.get(key)
    if cached is not None:
        return cached
    bases = list(_iter_rref_bases(m, ell, q))
    expected = gaussian_binomial(m, ell, q)
    if len(bases) != expected:
        raise TheoremViolation(
            f"enumerated {len(bases)} subspaces at (m={m}, ell={ell}, q={q}), "
            f"expected {expected}"
        )
    sat = np.zeros((len(bases), 1 << m), np.uint8)
    if q == 2:
        bits = np.zeros((len(bases), ell), np.int64)
        for s, mat in enumerate(bases):
            for r in range(ell):
                bits[s, r] = int(np.dot(mat[r], 1 << np.arange(m)))
        gf2_satisfaction(m, bits, sat)
    else:
        eye = np.eye(m, dtype=np.int64)
        for s, mat in enumerate(bases):
            for h in range(bitset.full_mask(m)):
                side = bitset.indices_of(h)
                stack = (
                    np.vstack([mat] + [eye[i - 1 : i] for i in side]) if side else mat
                )
                reduced, pivots = rref(stack, q)
                for j in range(1, m + 1):
                    if not h >> (j - 1) & 1 and in_span(
                        reduced, pivots, eye[j - 1], q
                    ):
                        sat[s, h] = 1
                        break
    _SAT_CACHE[key] = (bases, sat)
    return bases, sat


def exact_linear_rate(inst: PicInstance, q: int = 2) -> OracleResult:
    """Length of the shortest linear code over F_q satisfying the instance."""
    _check_linear_guard(inst.m, q)
    present = np.array(inst.present, np.int64).reshape(len(inst.present))
    field = prime_field(q)
    scanned = 0
    for ell in range(inst.m + 1):
        bases, sat = _sat_table(inst.m, q, ell)
        good = (
            sat[:, present].all(axis=1)
            if present.size
            else np.ones(len(bases), bool)
        )
        hits = np.nonzero(good)[0]
        if hits.size:
            idx = int(hits[0])
            scanned += idx + 1
            witness = CodeMatrix(
                field, inst.m, tuple(tuple(int(x) for x in row) for row in bases[idx])
            )
            return OracleResult(ell, q, witness, scanned)
        scanned += len(bases)
    raise TheoremViolation("the identity code always satisfies everyone")


def exact_general_rate(
    inst: PicInstance, q: int = 2, guard: int = GENERAL_GUARD_DEFAULT
) -> OracleResult:
    """Shortest length of any (not necessarily linear) code over F_q.

    Enumerates encoder tables exhaustively; refuses when
    ``q ** (ell * q^m)`` exceeds the guard before the answer is found.
    """
    if not is_prime(q):
        raise PicError(f"q={q} is not prime")
    m = inst.m
    n_inputs = q**m
    digit = np.zeros((n_inputs, m), np.int64)
    for i in range(m):
        digit[:, i] = (np.arange(n_inputs) // q**i) % q
    present = inst.present
    side = np.zeros((n_inputs, max(len(present), 1)), np.int64)
    comp_flat: list[int] = []
    comp_off = np.zeros(len(present) + 1, np.int64)
    for r, h in enumerate(present):
        mult = 1
        for i in bitset.indices_of(h):
            side[:, r] += digit[:, i - 1] * mult
            mult *= q
        comp_flat.extend(j for j in range(m) if not h >> j & 1)
        comp_off[r + 1] = len(comp_flat)
    comp = np.array(comp_flat, np.int64).reshape(len(comp_flat))
    scanned = 0
    for ell in range(m + 1):
        if ell == m:
            return OracleResult(
                m, q, EncoderTable(q, m, m, tuple(range(n_inputs))), scanned
            )
        combos = q ** (ell * n_inputs)
        if combos > guard:
            raise SearchSpaceTooLarge(
                f"encoder enumeration at length {ell} needs {combos} tables, "
                f"guard is {guard}"
            )
        table = np.zeros(n_inputs, np.int64)
        span = q ** (ell + m)
        seen_val = np.zeros(span, np.int64)
        seen_stamp = np.zeros(span, np.int64)
        out = np.zeros(n_inputs, np.int64)
        counter = np.zeros(1, np.int64)
        found = general_scan(
            q, ell, digit, side, comp, comp_off, table, seen_val, seen_stamp, out, counter
        )
        scanned += int(counter[0])
        if found:
            return OracleResult(
                ell, q, EncoderTable(q, m, ell, tuple(int(x) for x in out)), scanned
            )
    raise TheoremViolation("the identity encoder always satisfies everyone")


@dataclass(frozen=True)
class CrosscheckReport:
    classification: RateResult
    structural: int
    oracle_q: int
    oracle_rate: int
    code_length: int
    lstar: int | None


def crosscheck(
    inst: PicInstance, q: int = 2, lstar_budget: int | None = None
) -> CrosscheckReport:
    """Verify the full inequality chain on one instance.

    For truncated families below level ``L - 2`` the oracle runs over
    the construction's certified field; the binary field need not
    attain the rate there.
    """
    rr = classify(inst)
    structural = structural_lower_bound(inst)
    code = construct_for(inst, rr)
    report = verify_code(inst, code)
    oracle_q = q
    if rr.provenance == TAG_TRUNCATED:
        part, level = rr.params["partition"], rr.params["t"]
        if level < part.L - 2:
            oracle_q = code.field.q
    oracle = exact_linear_rate(inst, oracle_q)
    problems = []
    if not report.ok:
        problems.append(
            f"constructed code leaves receivers unsatisfied: "
            f"{[list(bitset.indices_of(h)) for h in report.unsatisfied]}"
        )
    if not structural <= rr.lower:
        problems.append(f"structural {structural} > classify lower {rr.lower}")
    if not rr.lower <= oracle.rate:
        problems.append(f"classify lower {rr.lower} > oracle {oracle.rate}")
    if not oracle.rate <= rr.upper:
        problems.append(f"oracle {oracle.rate} > classify upper {rr.upper}")
    if code.length != rr.upper:
        problems.append(f"code length {code.length} != upper {rr.upper}")
    if rr.exact and not rr.lower == oracle.rate == rr.upper:
        problems.append(
            f"exact rate {rr.lower} disagrees with oracle {oracle.rate}"
        )
    lstar_value = None
    if lstar_budget is not None:
        result = l_star(inst, lstar_budget)
        lstar_value = result.value
        if inst.m - lstar_value > oracle.rate:
            problems.append(
                f"chain bound {inst.m - lstar_value} > oracle {oracle.rate}"
            )
        l_max, _ = longest_nested_chain(inst)
        if lstar_value > l_max:
            problems.append(f"l_star {lstar_value} > longest chain {l_max}")
    if problems:
        raise TheoremViolation("; ".join(problems))
    return CrosscheckReport(
        rr, structural, oracle_q, oracle.rate, code.length, lstar_value
    )
