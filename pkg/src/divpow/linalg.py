"""
Dense exact linear algebra over a :class:`~divpow.scalars.FieldSpec`.

Prime fields go through numpy ``int64`` row operations; the rationals use
lists of :class:`fractions.Fraction`.  Pivoting is deterministic: the first
row (from the top) with a non-zero entry in the current column.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .scalars import FieldSpec, Scalar

__all__ = ["FieldMatrix", "rref", "rank", "nullspace"]

# p*p*ncols must stay below 2**63 for the int64 matmul path
_INT64_SAFE = 2**62


def _use_numpy(spec: FieldSpec) -> bool:
    return spec.is_finite and spec.characteristic < 2**31


def rref(spec: FieldSpec, rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of raw ``rows``; returns ``(R, pivot_cols)``."""
    if not rows:
        return [], []
    m, n = len(rows), len(rows[0])
    if _use_numpy(spec):
        p = spec.characteristic
        R = np.array(rows, dtype=np.int64).reshape(m, n) % p
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                R[[r, piv]] = R[[piv, r]]
            inv = pow(int(R[r, c]), p - 2, p)
            R[r] = (R[r] * inv) % p
            col = R[:, c].copy()
            col[r] = 0
            mask = np.nonzero(col)[0]
            if mask.size:
                R[mask] = (R[mask] - np.outer(col[mask], R[r])) % p
            pivots.append(c)
            r += 1
        return [[int(v) for v in row] for row in R], pivots

    R = [[spec.reduce(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = spec.inv(R[r][c])
        R[r] = [spec.mul(v, inv) for v in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [spec.sub(a, spec.mul(f, b)) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(spec: FieldSpec, rows: Sequence[Sequence]) -> int:
    return len(rref(spec, rows)[1])


def nullspace(spec: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{x : rows @ x = 0}``, one free variable set to 1 per vector."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[spec.one if i == j else spec.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(spec, rows)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [spec.zero] * ncols
        v[free] = spec.one
        for r, c in enumerate(pivots):
            v[c] = spec.neg(R[r][free])
        basis.append(v)
    return basis


class FieldMatrix:
    """Immutable dense matrix of raw field values."""

    __slots__ = ("spec", "rows")

    def __init__(self, spec: FieldSpec, rows: Sequence[Sequence]):
        rows = tuple(tuple(spec.reduce(v) for v in row) for row in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows must have equal length")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "FieldMatrix":
        return cls(spec, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, spec: FieldSpec, m: int, n: int) -> "FieldMatrix":
        return cls(spec, [[0] * n for _ in range(m)])

    @classmethod
    def from_columns(cls, spec: FieldSpec, columns: Sequence[Sequence], nrows: int | None = None) -> "FieldMatrix":
        if not columns:
            return cls(spec, [[] for _ in range(nrows or 0)])
        return cls(spec, list(zip(*columns)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.shape[1]

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self.spec, self.rows[i][j])

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list]:
        return [list(c) for c in zip(*self.rows)] if self.rows else []

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.spec, list(zip(*self.rows)))

    T = property(transpose)

    def _check(self, other: "FieldMatrix"):
        if other.spec != self.spec:
            raise ValueError("matrices over different fields")

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.spec
        return FieldMatrix(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "FieldMatrix":
        F = self.spec
        c = F.reduce(c)
        return FieldMatrix(F, [[F.mul(c, a) for a in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            self._check(other)
            return FieldMatrix(self.spec, _matmul(self.spec, self.rows, other.rows))
        # vector
        F = self.spec
        vec = [F.reduce(v) for v in other]
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [r[0] for r in _matmul(F, self.rows, [[v] for v in vec])]

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.spec == other.spec and self.rows == other.rows

    def __hash__(self):
        return hash((self.spec, self.rows))

    def __repr__(self):
        body = "\n ".join(" ".join(str(v) for v in r) for r in self.rows)
        return f"FieldMatrix({self.spec!r}, {self.shape[0]}x{self.shape[1]})\n [{body}]"

    def rank(self) -> int:
        return rank(self.spec, self.rows)

    def rref(self):
        return rref(self.spec, self.rows)

    def nullspace(self) -> list[list]:
        return nullspace(self.spec, self.rows, self.ncols)

    def is_invertible(self) -> bool:
        m, n = self.shape
        return m == n and self.rank() == n

    def inverse(self) -> "FieldMatrix":
        n = self.nrows
        if not self.is_invertible():
            raise ZeroDivisionError("matrix is singular")
        F = self.spec
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        R, _ = rref(F, aug)
        return FieldMatrix(F, [r[n:] for r in R])

    def solve(self, b: Sequence):
        """One solution of ``self @ x = b`` or ``None`` if inconsistent."""
        F = self.spec
        n = self.ncols
        aug = [list(r) + [F.reduce(v)] for r, v in zip(self.rows, b)]
        R, pivots = rref(F, aug)
        if n in pivots:
            return None
        x = [F.zero] * n
        for r, c in enumerate(pivots):
            x[c] = R[r][n]
        return x

    def to_json(self) -> list:
        return [[self.spec.encode(v) for v in r] for r in self.rows]


def _matmul(F: FieldSpec, A, B):
    m = len(A)
    k = len(B)
    n = len(B[0]) if B else 0
    if m == 0 or n == 0:
        return [[] for _ in range(m)] if n == 0 else []
    if _use_numpy(F) and F.characteristic**2 * max(k, 1) < _INT64_SAFE:
        p = F.characteristic
        C = (np.array(A, dtype=np.int64).reshape(m, k) @ np.array(B, dtype=np.int64).reshape(k, n)) % p
        return [[int(v) for v in row] for row in C]
    out = []
    for row in A:
        acc = [F.zero] * n
        for a, brow in zip(row, B):
            if a == 0:
                continue
            for j, b in enumerate(brow):
                if b != 0:
                    acc[j] = F.add(acc[j], F.mul(a, b))
        out.append(acc)
    return out

