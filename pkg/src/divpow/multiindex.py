"""
Exponent vectors and the characteristic-p combinatorics around them.

Compositions index the monomial bases of divided and symmetric powers.  The
rest of the module is about when a multinomial coefficient survives mod p:
Kummer's carry count, Lucas' digit-wise reduction, and F-disjoint sequences
(prefix sums dominated by the next term, and in characteristic p by the
largest power of p dividing it).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .scalars import FieldSpec, Scalar, is_prime

__all__ = [
    "Composition",
    "compositions",
    "composition_index",
    "multinomial",
    "p_valuation",
    "carry_count",
    "multinomial_mod_p",
    "is_F_disjoint",
    "gen_F_disjoint",
]

# plain tuples are the runtime representation; the alias documents intent
Composition = tuple


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")


@lru_cache(maxsize=None)
def compositions(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All ``d``-part compositions of ``n``, first part descending.

    >>> compositions(2, 2)
    ((2, 0), (1, 1), (0, 2))
    """
    if d < 1:
        raise ValueError("need at least one part")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if d == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in compositions(n - first, d - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def composition_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {c: i for i, c in enumerate(compositions(n, d))}


def multinomial(parts: Sequence[int]) -> int:
    if any(a < 0 for a in parts):
        raise ValueError("parts must be nonnegative")
    out = 1
    total = 0
    for a in parts:
        total += a
        out *= math.comb(total, a)
    return out


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def carry_count(parts: Sequence[int], p: int) -> int:
    """Carries when the parts are added left to right in base ``p``."""
    _check_prime(p)
    if any(a < 0 for a in parts):
        raise ValueError("parts must be nonnegative")
    carries = 0
    acc = 0
    for a in parts:
        x, y = _digits(acc, p), _digits(a, p)
        c = 0
        for k in range(max(len(x), len(y))):
            s = (x[k] if k < len(x) else 0) + (y[k] if k < len(y) else 0) + c
            c = 1 if s >= p else 0
            carries += c
        acc += a
    return carries


def _binom_mod_p(n: int, k: int, p: int) -> int:
    # Lucas
    out = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        out = out * math.comb(ni, ki) % p
    return out


def multinomial_mod_p(parts: Sequence[int], p: int) -> Scalar:
    _check_prime(p)
    if any(a < 0 for a in parts):
        raise ValueError("parts must be nonnegative")
    out = 1
    total = 0
    for a in parts:
        total += a
        out = out * _binom_mod_p(total, a, p) % p
        if out == 0:
            break
    return Scalar(FieldSpec(p), out)


def is_F_disjoint(seq: Sequence[int], characteristic: int) -> bool:
    if any(a <= 0 for a in seq):
        raise ValueError("F-disjointness is defined for positive integers")
    FieldSpec(characteristic)  # validates
    prefix = 0
    for i in range(len(seq) - 1):
        prefix += seq[i]
        nxt = seq[i + 1]
        if not prefix < nxt:
            return False
        if characteristic and not prefix < characteristic ** p_valuation(nxt, characteristic):
            return False
    return True


def gen_F_disjoint(count: int, characteristic: int, leading_one: bool = False) -> list[int]:
    """``count`` F-disjoint integers: ``p, p^2, ...`` (or ``2, 4, ...`` in char 0)."""
    if count < 1:
        raise ValueError("count must be positive")
    FieldSpec(characteristic)
    base = characteristic or 2
    seq = [base**k for k in range(1, count + 1)]
    return ([1] + seq) if leading_one else seq
