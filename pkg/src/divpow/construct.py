"""
Builders for the explicit tensors and subspaces of the Tannakian construction.

* the free tensor ``x = [e_1]_{a_1} ... [e_d]_{a_d} [e_1 + ... + e_d]_{a_{d+1}}``,
  whose PGL stabilizer is trivial when ``1, a_1, ..., a_{d+1}`` are F-disjoint;
* multiplication maps ``M_y : Γ^a -> Γ^{a+b}, x -> x [y]_b`` and the product
  map ``τ(x_1, ..., x_k) = [x_1]_{a_1} ... [x_k]_{a_k}``;
* ``L = M_{w_0}(L_Z) ⊂ Γ^{m+q}(W)`` with ``q`` the shift power, together with
  the combinatorial fact that no basis symbol of degree ``m + q < 2q`` has two
  exponents ``>= q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .gamma import GammaElement, basis_symbol, gamma_dim, gamma_mul, pure_symbol
from .linalg import FieldMatrix, rank
from .multiindex import compositions, gen_F_disjoint, is_F_disjoint
from .scalars import FieldSpec

__all__ = [
    "FreeTensorSpec",
    "build_free_tensor",
    "MultMap",
    "mult_map_matrix",
    "tau_eval",
    "projective_points",
    "tau_injectivity_check",
    "shift_power",
    "TannakaData",
    "build_L",
    "ShapeReport",
    "shape_separation_check",
    "FixedPoint",
    "fixed_point_w0",
    "diagonal_block_size",
    "diagonal_embed",
]


def _is_zero_vector(v) -> bool:
    return all(c == 0 for c in v)


@dataclass(frozen=True)
class FreeTensorSpec:
    d: int
    spec: FieldSpec
    a: tuple[int, ...]
    x: GammaElement

    @property
    def r(self) -> int:
        return sum(self.a)

    @property
    def points(self) -> list[tuple]:
        """``e_1, ..., e_d, e_1 + ... + e_d`` as coordinate tuples."""
        F = self.spec
        pts = [tuple(F.one if j == i else F.zero for j in range(self.d)) for i in range(self.d)]
        pts.append((F.one,) * self.d)
        return pts

    def to_json(self) -> dict:
        return {"d": self.d, "char": self.spec.characteristic, "a": list(self.a), "r": self.r,
                "ambient_dim": gamma_dim(self.r, self.d), "x": self.x.to_json()}


def build_free_tensor(d: int, spec: FieldSpec, a: Sequence[int] | None = None) -> FreeTensorSpec:
    if d < 3:
        raise ValueError("the free tensor needs d >= 3")
    if a is None:
        a = gen_F_disjoint(d + 1, spec.characteristic)
    a = tuple(int(k) for k in a)
    if len(a) != d + 1:
        raise ValueError(f"need {d + 1} exponents, got {len(a)}")
    if not is_F_disjoint((1,) + a, spec.characteristic):
        raise ValueError(f"(1, {', '.join(map(str, a))}) is not F-disjoint in characteristic {spec.characteristic}")
    F = spec
    pts = [[1 if j == i else 0 for j in range(d)] for i in range(d)] + [[1] * d]
    x = tau_eval(F, pts, a)
    assert not x.is_zero(), "free tensor vanished"
    return FreeTensorSpec(d, F, a, x)


@dataclass(frozen=True)
class MultMap:
    matrix: FieldMatrix
    disjoint: bool
    rank: int

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.matrix.ncols


def mult_map_matrix(y: Sequence, a: int, b: int, spec: FieldSpec) -> MultMap:
    """Matrix of ``M_y : Γ^a -> Γ^{a+b}`` in the composition bases.

    When ``(a, b)`` is F-disjoint the map is injective, which is asserted.
    Otherwise the matrix is returned with ``disjoint=False``.
    """
    y = tuple(spec.reduce(c) for c in y)
    if _is_zero_vector(y):
        raise ValueError("y must be non-zero")
    d = len(y)
    yb = pure_symbol(spec, y, b)
    cols = [gamma_mul(basis_symbol(spec, c), yb).to_vector() for c in compositions(a, d)]
    M = FieldMatrix.from_columns(spec, cols)
    disjoint = a >= 1 and b >= 1 and is_F_disjoint([a, b], spec.characteristic)
    rk = M.rank()
    if disjoint and rk != len(cols):
        raise AssertionError(f"M_y is not injective for F-disjoint ({a}, {b}), y = {y}")
    return MultMap(M, disjoint, rk)


def tau_eval(spec: FieldSpec, points: Sequence[Sequence], a: Sequence[int]) -> GammaElement:
    """``[x_1]_{a_1} [x_2]_{a_2} ... [x_k]_{a_k}``."""
    if len(points) != len(a):
        raise ValueError("one exponent per point")
    if not points:
        raise ValueError("need at least one point")
    out = None
    for v, k in zip(points, a):
        v = tuple(spec.reduce(c) for c in v)
        if _is_zero_vector(v):
            raise ValueError("points must be non-zero")
        s = pure_symbol(spec, v, k)
        out = s if out is None else gamma_mul(out, s)
    return out


def projective_points(spec: FieldSpec, d: int) -> list[tuple]:
    """Representatives of ``P^{d-1}(F_p)``, leading non-zero coordinate 1."""
    if not spec.is_finite:
        raise ValueError("finite field required")
    p = spec.characteristic
    out = []
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


def tau_injectivity_check(spec: FieldSpec, d: int, a: Sequence[int]) -> dict:
    """Evaluate ``τ`` on every tuple of projective points and compare lines."""
    pts = projective_points(spec, d)
    seen: dict = {}
    collisions = []
    count = 0
    for tup in itertools.product(pts, repeat=len(a)):
        count += 1
        val = tau_eval(spec, tup, a)
        if val.is_zero():
            collisions.append({"tuple": [list(t) for t in tup], "other": None})
            continue
        key = tuple(sorted(val.normalized().coeffs.items()))
        if key in seen:
            collisions.append({"tuple": [list(t) for t in tup], "other": [list(t) for t in seen[key]]})
        else:
            seen[key] = tup
    return {"char": spec.characteristic, "d": d, "a": list(a), "tuples": count,
            "distinct_lines": len(seen), "injective": not collisions, "collisions": collisions}


def shift_power(m: int, characteristic: int) -> int:
    """``m + 1`` in characteristic 0, else the smallest power of p above ``m``."""
    if m < 1:
        raise ValueError("m must be positive")
    FieldSpec(characteristic)
    if characteristic == 0:
        return m + 1
    q = characteristic
    while q <= m:
        q *= characteristic
    return q


@dataclass(frozen=True)
class TannakaData:
    spec: FieldSpec
    w_dim: int
    m: int
    q: int
    L_Z: tuple
    w0: tuple
    L: tuple

    @property
    def n(self) -> int:
        return self.m + self.q

    @property
    def m_not_minus_one(self) -> bool:
        """``m != -1`` in F, needed for the infinitesimal part of the argument."""
        p = self.spec.characteristic
        return p == 0 or (self.m + 1) % p != 0

    def to_json(self) -> dict:
        return {"char": self.spec.characteristic, "w_dim": self.w_dim, "m": self.m, "q": self.q,
                "n": self.n, "m_not_minus_one": self.m_not_minus_one,
                "w0": [self.spec.encode(c) for c in self.w0],
                "L_Z": [e.to_json() for e in self.L_Z], "L": [e.to_json() for e in self.L]}


def build_L(L_Z: Sequence[GammaElement], w0: Sequence, spec: FieldSpec) -> TannakaData:
    if not L_Z:
        raise ValueError("L_Z must be non-empty")
    d, m = L_Z[0].dim, L_Z[0].degree
    if any((e.spec, e.dim, e.degree) != (spec, d, m) for e in L_Z):
        raise ValueError("L_Z must be a list of elements of one Γ^m(W)")
    w0 = tuple(spec.reduce(c) for c in w0)
    if len(w0) != d:
        raise ValueError("w0 has the wrong length")
    if _is_zero_vector(w0):
        raise ValueError("w0 must be non-zero")
    if rank(spec, [e.to_vector() for e in L_Z]) != len(L_Z):
        raise ValueError("L_Z is linearly dependent")
    q = shift_power(m, spec.characteristic)
    mm = mult_map_matrix(w0, m, q, spec)
    L = tuple(GammaElement.from_vector(spec, d, m + q, mm.matrix @ e.to_vector()) for e in L_Z)
    if rank(spec, [e.to_vector() for e in L]) != len(L):
        raise AssertionError("M_w0 failed to preserve independence")
    return TannakaData(spec, d, m, q, tuple(L_Z), w0, L)


@dataclass(frozen=True)
class ShapeReport:
    m: int
    characteristic: int
    w_dim: int
    q: int
    n: int
    total: int
    shape_a: int
    shape_b: int
    both: int

    @property
    def certified(self) -> bool:
        return self.both == 0 and self.n < 2 * self.q

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["certified"] = self.certified
        return out


def shape_separation_check(m: int, characteristic: int, w_dim: int) -> ShapeReport:
    """Count symbols of degree ``n = m + q`` with a large first (A) or second (B) exponent.

    ``both`` counts compositions with two distinct coordinates ``>= q``;
    the certificate is that it vanishes.
    """
    if w_dim < 2:
        raise ValueError("need dim W >= 2")
    q = shift_power(m, characteristic)
    n = m + q
    total = shape_a = shape_b = both = 0
    for c in compositions(n, w_dim):
        total += 1
        shape_a += c[0] >= q
        shape_b += c[1] >= q
        if sum(1 for k in c if k >= q) >= 2:
            both += 1
    return ShapeReport(m, characteristic, w_dim, q, n, total, shape_a, shape_b, both)


@dataclass(frozen=True)
class FixedPoint:
    first: tuple
    second: tuple
    symbol: GammaElement


def fixed_point_w0(n_block: int, a1: int, r: int, spec: FieldSpec) -> FixedPoint:
    """``[e_n]_{a_1} [e_{2n}]_{r - a_1}`` in Γ^r(F^{2n}), with ``n = n_block``."""
    if n_block < 1:
        raise ValueError("block size must be positive")
    if not 0 < a1 < r:
        raise ValueError("need 0 < a1 < r")
    d = 2 * n_block
    first = tuple(1 if i == n_block - 1 else 0 for i in range(d))
    second = tuple(1 if i == d - 1 else 0 for i in range(d))
    symbol = tau_eval(spec, [first, second], [a1, r - a1])
    return FixedPoint(first, second, symbol)


def diagonal_block_size(group_dim: int) -> int:
    """Smallest ``n >= 2`` with ``2n - 1 > group_dim``."""
    if group_dim < 0:
        raise ValueError("group dimension must be nonnegative")
    n = 2
    while 2 * n - 1 <= group_dim:
        n += 1
    return n


def diagonal_embed(g: FieldMatrix) -> FieldMatrix:
    """``g -> diag(g, g)``."""
    n = g.nrows
    F = g.spec
    rows = [list(r) + [F.zero] * n for r in g.rows] + [[F.zero] * n + list(r) for r in g.rows]
    return FieldMatrix(F, rows)
