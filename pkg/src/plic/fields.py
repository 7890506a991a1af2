"""Prime-field scalars and small dense linear algebra over F_q.

Matrices are numpy int64 arrays with entries reduced mod q.  Sizes here
are tiny (rows bounded by m + code length, m <= 24), so clarity beats
vectorization tricks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PicError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def primitive_root(q: int) -> int:
    """Least generator of the multiplicative group of F_q (1 for q = 2)."""
    if q == 2:
        return 1
    order = q - 1
    factors = _prime_factors(order)
    for g in range(2, q):
        if all(pow(g, order // p, q) != 1 for p in factors):
            return g
    raise PicError(f"no primitive root found for q={q}")  # unreachable for primes


@dataclass(frozen=True)
class PrimeField:
    """A prime field together with its least primitive root."""

    q: int
    gamma: int


def prime_field(q: int) -> PrimeField:
    if not is_prime(q):
        raise PicError(f"q={q} is not prime")
    return PrimeField(q, primitive_root(q))


def rref(rows: np.ndarray, q: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form over F_q.

    Returns the nonzero rows (unit pivots, pivot columns cleared
    elsewhere) and the pivot column indices.
    """
    mat = np.asarray(rows, dtype=np.int64)
    if mat.ndim == 1:
        mat = mat.reshape((0, 0)) if mat.size == 0 else mat.reshape(1, -1)
    mat = mat.copy() % q
    n_rows, n_cols = mat.shape
    pivots: list[int] = []
    r = 0
    for col in range(n_cols):
        pivot = -1
        for i in range(r, n_rows):
            if mat[i, col] % q:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        inv = pow(int(mat[r, col]), q - 2, q) if q > 2 else 1
        mat[r] = mat[r] * inv % q
        for i in range(n_rows):
            if i != r and mat[i, col]:
                mat[i] = (mat[i] - mat[i, col] * mat[r]) % q
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    return mat[:r], tuple(pivots)


def in_span(reduced: np.ndarray, pivots: tuple[int, ...], v: np.ndarray, q: int) -> bool:
    """Membership of ``v`` in the row space of an rref basis."""
    res = np.array(v, dtype=np.int64) % q
    for row, col in zip(reduced, pivots):
        coeff = res[col]
        if coeff:
            res = (res - coeff * row) % q
    return not res.any()


def rank(rows: np.ndarray, q: int) -> int:
    return len(rref(rows, q)[1])
