"""
Exact scalars: prime fields F_p and the rationals, plus finite local algebras.

Raw values are kept in canonical form everywhere: ints in ``range(p)`` for a
prime field, :class:`fractions.Fraction` for the rationals.  The heavy modules
(:mod:`divpow.gamma`, :mod:`divpow.linalg`) work on raw values through the
arithmetic methods of :class:`FieldSpec`; :class:`Scalar` is the user-facing
wrapper with operator overloading.

A :class:`LocalAlgebra` is given by structure constants.  Only the truncated
polynomial family ``F[t]/t^k`` is shipped (``k = 2`` is the dual numbers).
"""

from __future__ import annotations

import itertools
from random import Random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "FieldSpec",
    "Scalar",
    "QQ",
    "GF",
    "is_prime",
    "LocalAlgebra",
    "LocalElem",
    "make_dual_numbers",
    "truncated_poly_algebra",
    "local_mul",
    "NakayamaReport",
    "nakayama_verify",
]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases, exact below 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The base field: ``characteristic == 0`` means Q, otherwise F_p."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or isinstance(c, bool):
            raise TypeError("characteristic must be an int")
        if c != 0 and not is_prime(c):
            raise ValueError(f"characteristic must be 0 or a prime, got {c}")

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int | None:
        return self.characteristic or None

    # -- raw arithmetic -------------------------------------------------

    def reduce(self, v):
        """Canonical raw form of an int, Fraction, Scalar or ``"a/b"`` string."""
        if isinstance(v, Scalar):
            if v.spec != self:
                raise ValueError(f"scalar over {v.spec} used in {self}")
            return v.value
        p = self.characteristic
        if p == 0:
            return Fraction(v)
        if isinstance(v, str):
            v = Fraction(v)
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"{v} has no image in GF({p})")
            return v.numerator * pow(v.denominator, -1, p) % p
        return int(v) % p

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def from_int(self, k: int):
        p = self.characteristic
        return Fraction(k) if p == 0 else k % p

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return 1 / a if p == 0 else pow(a, p - 2, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        p = self.characteristic
        if k < 0:
            return self.pow(self.inv(a), -k)
        return a**k if p == 0 else pow(a, k, p)

    def is_zero(self, a) -> bool:
        return a == 0

    # -- helpers ---------------------------------------------------------

    def __call__(self, v) -> "Scalar":
        return Scalar(self, self.reduce(v))

    def elements(self) -> Iterator:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite field")
        return iter(range(self.characteristic))

    def random(self, rng: Random, nonzero: bool = False, height: int = 5):
        """A random raw element; rationals are drawn with bounded height."""
        while True:
            if self.is_finite:
                v = rng.randrange(self.characteristic)
            else:
                v = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if v != 0 or not nonzero:
                return v

    def encode(self, a):
        """JSON-friendly form of a raw value."""
        if self.characteristic == 0:
            return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return a

    def decode(self, obj):
        return self.reduce(obj)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True, eq=False)
class Scalar:
    """An element of a :class:`FieldSpec`, stored canonically."""

    spec: FieldSpec
    value: object

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.spec != self.spec:
                raise ValueError(f"mixed fields: {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.spec.reduce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.spec.div(o, self.value))

    def __neg__(self):
        return Scalar(self.spec, self.spec.neg(self.value))

    def __pow__(self, k: int):
        return Scalar(self.spec, self.spec.pow(self.value, k))

    def inverse(self) -> "Scalar":
        return Scalar(self.spec, self.spec.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.spec.reduce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.characteristic, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.spec!r}({self.value})"

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# finite local algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalAlgebra:
    """A finite local algebra over a prime field or Q, by structure constants.

    ``table[i][j]`` is the coordinate tuple of ``b_i * b_j``.  Basis element 0
    is the unit, ``maximal`` lists the basis indices spanning the maximal
    ideal and ``residue`` is the linear form rho on coordinates.
    """

    base: FieldSpec
    labels: tuple
    table: tuple
    maximal: tuple
    residue: tuple
    name: str = field(default="A")

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise ValueError("algebra dimension must be positive")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be dim x dim")
        if any(len(c) != n for row in self.table for c in row):
            raise ValueError("structure constants must have length dim")
        if len(self.residue) != n:
            raise ValueError("residue map must have length dim")

    @property
    def dim(self) -> int:
        return len(self.labels)

    # ring protocol on raw coordinate tuples, used by gamma over A

    @property
    def zero(self):
        return (self.base.zero,) * self.dim

    @property
    def one(self):
        return (self.base.one,) + (self.base.zero,) * (self.dim - 1)

    def from_int(self, k: int):
        return (self.base.from_int(k),) + (self.base.zero,) * (self.dim - 1)

    def add(self, x, y):
        F = self.base
        return tuple(F.add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        F = self.base
        return tuple(F.sub(a, b) for a, b in zip(x, y))

    def neg(self, x):
        F = self.base
        return tuple(F.neg(a) for a in x)

    def mul(self, x, y):
        F = self.base
        out = [F.zero] * self.dim
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = self.table[i]
            for j, b in enumerate(y):
                if b == 0:
                    continue
                ab = F.mul(a, b)
                for k, c in enumerate(row[j]):
                    if c != 0:
                        out[k] = F.add(out[k], F.mul(ab, c))
        return tuple(out)

    def pow(self, x, k: int):
        out = self.one
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def is_zero(self, x) -> bool:
        return all(a == 0 for a in x)

    def rho(self, x):
        F = self.base
        acc = F.zero
        for a, r in zip(x, self.residue):
            acc = F.add(acc, F.mul(a, r))
        return acc

    # elements

    def elem(self, coords: Sequence) -> "LocalElem":
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return LocalElem(self, tuple(self.base.reduce(c) for c in coords))

    def basis_elem(self, i: int) -> "LocalElem":
        return LocalElem(self, tuple(self.base.one if j == i else self.base.zero for j in range(self.dim)))

    def scalar(self, c) -> "LocalElem":
        return self.elem([c] + [0] * (self.dim - 1))

    def elements(self) -> Iterator["LocalElem"]:
        for coords in itertools.product(list(self.base.elements()), repeat=self.dim):
            yield LocalElem(self, coords)

    def check_axioms(self) -> None:
        """Raise ``ValueError`` unless the table is a commutative local algebra."""
        n = self.dim
        basis = [self.basis_elem(i).coords for i in range(n)]
        for i in range(n):
            if self.mul(self.one, basis[i]) != basis[i]:
                raise ValueError("basis element 0 is not a unit")
            for j in range(n):
                if self.mul(basis[i], basis[j]) != self.mul(basis[j], basis[i]):
                    raise ValueError("multiplication is not commutative")
                for k in range(n):
                    lhs = self.mul(self.mul(basis[i], basis[j]), basis[k])
                    rhs = self.mul(basis[i], self.mul(basis[j], basis[k]))
                    if lhs != rhs:
                        raise ValueError("multiplication is not associative")
        for i in self.maximal:
            if not self.is_zero(self.pow(basis[i], n)):
                raise ValueError(f"maximal-ideal generator {self.labels[i]} is not nilpotent")
            if self.rho(basis[i]) != 0:
                raise ValueError("residue map does not kill the maximal ideal")
        if self.rho(self.one) != self.base.one:
            raise ValueError("residue map is not unital")
        if len(self.maximal) != n - 1:
            raise ValueError("maximal ideal must have codimension one")

    def __repr__(self):
        return f"{self.name} over {self.base!r}"


@dataclass(frozen=True)
class LocalElem:
    algebra: LocalAlgebra = field(compare=False)
    coords: tuple

    def _other(self, other):
        if isinstance(other, LocalElem):
            if other.algebra is not self.algebra:
                raise ValueError("elements of different local algebras")
            return other.coords
        if isinstance(other, (int, Fraction, Scalar)):
            return self.algebra.scalar(other).coords
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return LocalElem(self.algebra, self.algebra.add(self.coords, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return LocalElem(self.algebra, self.algebra.sub(self.coords, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return LocalElem(self.algebra, self.algebra.sub(o, self.coords))

    def __mul__(self, other):
        if isinstance(other, LocalElem):
            return local_mul(self, other)
        o = self._other(other)
        if o is NotImplemented:
            return o
        return LocalElem(self.algebra, self.algebra.mul(self.coords, o))

    __rmul__ = __mul__

    def __neg__(self):
        return LocalElem(self.algebra, self.algebra.neg(self.coords))

    def __pow__(self, k: int):
        return LocalElem(self.algebra, self.algebra.pow(self.coords, k))

    def residue(self) -> Scalar:
        return Scalar(self.algebra.base, self.algebra.rho(self.coords))

    def __bool__(self):
        return not self.algebra.is_zero(self.coords)

    def __eq__(self, other):
        if isinstance(other, LocalElem):
            return self.algebra is other.algebra and self.coords == other.coords
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self.coords == o

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        terms = [f"{c}*{lab}" for c, lab in zip(self.coords, self.algebra.labels) if c != 0]
        return " + ".join(terms) if terms else "0"


def local_mul(x: LocalElem, y: LocalElem) -> LocalElem:
    if x.algebra is not y.algebra:
        raise ValueError("cannot multiply elements of different local algebras")
    return LocalElem(x.algebra, x.algebra.mul(x.coords, y.coords))


def truncated_poly_algebra(spec: FieldSpec, k: int) -> LocalAlgebra:
    """``F[t]/t^k`` with basis ``1, t, ..., t^(k-1)``."""
    if k < 1:
        raise ValueError("truncation order k must be >= 1")
    zero, one = spec.zero, spec.one
    table = []
    for i in range(k):
        row = []
        for j in range(k):
            row.append(tuple(one if (i + j == m) else zero for m in range(k)))
        table.append(tuple(row))
    labels = ("1",) + tuple("t" if i == 1 else f"t^{i}" for i in range(1, k))
    residue = (one,) + (zero,) * (k - 1)
    return LocalAlgebra(spec, labels, tuple(table), tuple(range(1, k)), residue, name=f"{spec!r}[t]/t^{k}")


def make_dual_numbers(spec: FieldSpec) -> LocalAlgebra:
    A = truncated_poly_algebra(spec, 2)
    return LocalAlgebra(spec, ("1", "eps"), A.table, A.maximal, A.residue, name=f"{spec!r}[eps]")


# ---------------------------------------------------------------------------
# Nakayama for Artinian rings
# ---------------------------------------------------------------------------


@dataclass
class NakayamaReport:
    mode: str
    status: str  # "pass" | "fail" | "precondition-failed" | "unsupported"
    residue_rank: int | None = None
    reason: str = ""
    witness: object = None
    enumerated: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "residue_rank": self.residue_rank,
            "reason": self.reason,
            "witness": self.witness,
            "enumerated": self.enumerated,
        }


NAKAYAMA_GUARD = 10**6


def _apply(A: LocalAlgebra, Phi, x):
    out = []
    for row in Phi:
        acc = A.zero
        for entry, xi in zip(row, x):
            acc = A.add(acc, A.mul(entry.coords, xi))
        out.append(acc)
    return tuple(out)


def nakayama_verify(Phi: Sequence[Sequence[LocalElem]], mode: str) -> NakayamaReport:
    """Certify the Artinian Nakayama statement for one matrix by enumeration.

    ``Phi`` is a ``rows x cols`` matrix of :class:`LocalElem`, read as a map
    ``A^cols -> A^rows`` of free modules.  If the residue matrix is
    surjective (``mode="surjective"``) or injective (``mode="injective"``),
    the corresponding property of ``Phi`` itself is checked over every
    element of the finite source module.
    """
    # local import: linalg depends on this module
    from .linalg import FieldMatrix

    if mode not in ("surjective", "injective"):
        raise ValueError(f"unknown mode {mode!r}")
    rows = len(Phi)
    cols = len(Phi[0]) if rows else 0
    if any(len(r) != cols for r in Phi):
        raise ValueError("Phi must be rectangular")
    if rows == 0 or cols == 0:
        raise ValueError("Phi must be non-empty")
    A = Phi[0][0].algebra
    if any(e.algebra is not A for r in Phi for e in r):
        raise ValueError("all entries must live in one local algebra")
    F = A.base
    if not F.is_finite:
        return NakayamaReport(mode, "unsupported", reason="infinite base field: enumeration impossible")

    phi = FieldMatrix(F, [[A.rho(e.coords) for e in r] for r in Phi])
    rk = phi.rank()
    if mode == "surjective" and rk != rows:
        return NakayamaReport(mode, "precondition-failed", rk, reason="residue not surjective")
    if mode == "injective" and rk != cols:
        return NakayamaReport(mode, "precondition-failed", rk, reason="residue not injective")

    size = F.characteristic ** (A.dim * cols)
    if size > NAKAYAMA_GUARD:
        return NakayamaReport(mode, "unsupported", rk, reason=f"source module has {size} elements")

    module_elems = list(itertools.product(*(range(F.characteristic),) * A.dim))
    if mode == "surjective":
        image = {_apply(A, Phi, x) for x in itertools.product(module_elems, repeat=cols)}
        zero = A.zero
        # an F-spanning set of the target: b_j placed in slot k
        for k in range(rows):
            for j in range(A.dim):
                b = [zero] * rows
                b[k] = A.basis_elem(j).coords
                if tuple(b) not in image:
                    return NakayamaReport(mode, "fail", rk, reason="target vector not in image",
                                          witness=[list(v) for v in b], enumerated=size)
        return NakayamaReport(mode, "pass", rk, enumerated=size)

    for x in itertools.product(module_elems, repeat=cols):
        if all(A.is_zero(v) for v in x):
            continue
        if all(A.is_zero(v) for v in _apply(A, Phi, x)):
            return NakayamaReport(mode, "fail", rk, reason="non-zero kernel element",
                                  witness=[list(v) for v in x], enumerated=size)
    return NakayamaReport(mode, "pass", rk, enumerated=size)
