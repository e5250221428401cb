"""
Sparse divided powers Γⁿ(V) and symmetric powers Symⁿ(V) of V = F^d.

Both are stored in their monomial bases, keyed by compositions of n:

* ``GammaElement`` key ``a`` is the symbol ``[e_1]_{a_1} ... [e_d]_{a_d}``;
* ``SymElement`` key ``a`` is the monomial ``e_1^{a_1} ... e_d^{a_d}``.

Pure symbols never serve as a representation, since over a small prime
field they do not span Γⁿ(V).  Products of basis symbols follow
``[e]_a [e]_b = prod_i C(a_i + b_i, a_i) [e]_{a+b}``.

Most routines here are written against a small "ring" protocol (``zero``,
``one``, ``add``, ``mul``, ``pow``, ``from_int``, ``is_zero``) so that the same
expansion code runs with coefficients in a local algebra such as the dual
numbers; :func:`dual_number_derivation` uses that to extract the
infinitesimal action as an independent check on :func:`derivation_action`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import FieldMatrix
from .multiindex import composition_index, compositions, multinomial
from .scalars import FieldSpec, LocalAlgebra, Scalar, make_dual_numbers

__all__ = [
    "GammaElement",
    "SymElement",
    "basis_symbol",
    "monomial",
    "pure_symbol",
    "gamma_mul",
    "sym_linear",
    "sym_mul",
    "pairing",
    "sym_to_gamma",
    "gamma_to_sym",
    "sym_to_gamma_matrix",
    "gamma_to_sym_matrix",
    "induced_gl_action",
    "act",
    "derivation_action",
    "derive",
    "dual_number_derivation",
    "veronese",
    "element_from_json",
    "gamma_dim",
]


def gamma_dim(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


# ---------------------------------------------------------------------------
# ring-generic kernels on plain dicts  {composition: raw coefficient}
# ---------------------------------------------------------------------------


def _pure_terms(ring, v: Sequence, n: int) -> dict:
    """Coordinates of ``[v]_n``: the coefficient of ``[e]_a`` is ``prod v_i^a_i``."""
    d = len(v)
    powers = []
    for vi in v:
        row = [ring.one]
        for _ in range(n):
            row.append(ring.mul(row[-1], vi))
        powers.append(row)
    out = {}
    for a in compositions(n, d):
        c = ring.one
        for i, ai in enumerate(a):
            if ai:
                c = ring.mul(c, powers[i][ai])
                if ring.is_zero(c):
                    break
        if not ring.is_zero(c):
            out[a] = c
    return out


def _binom_prod(a: tuple, b: tuple) -> int:
    out = 1
    for ai, bi in zip(a, b):
        if ai and bi:
            out *= math.comb(ai + bi, ai)
    return out


def _gamma_mul_terms(ring, x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            k = ring.from_int(_binom_prod(a, b))
            if ring.is_zero(k):
                continue
            c = ring.mul(k, ring.mul(ca, cb))
            if ring.is_zero(c):
                continue
            key = tuple(i + j for i, j in zip(a, b))
            prev = out.get(key)
            c = c if prev is None else ring.add(prev, c)
            if ring.is_zero(c):
                out.pop(key, None)
            else:
                out[key] = c
    return out


def _sym_mul_terms(ring, x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            c = ring.mul(ca, cb)
            if ring.is_zero(c):
                continue
            key = tuple(i + j for i, j in zip(a, b))
            prev = out.get(key)
            c = c if prev is None else ring.add(prev, c)
            if ring.is_zero(c):
                out.pop(key, None)
            else:
                out[key] = c
    return out


def _induced_column(ring, gcols: Sequence[Sequence], a: tuple, cache: dict) -> dict:
    """``prod_i [g e_i]_{a_i}`` with ``gcols[i] = g e_i``."""
    d = len(a)
    acc = {(0,) * d: ring.one}
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        key = (i, ai)
        if key not in cache:
            cache[key] = _pure_terms(ring, gcols[i], ai)
        acc = _gamma_mul_terms(ring, acc, cache[key])
    return acc


# ---------------------------------------------------------------------------
# element types
# ---------------------------------------------------------------------------


class _SparseTensor:
    kind = ""
    __slots__ = ("spec", "dim", "degree", "coeffs")

    def __init__(self, spec: FieldSpec, dim: int, degree: int, coeffs: Mapping | None = None):
        if dim < 1 or degree < 0:
            raise ValueError("need dim >= 1 and degree >= 0")
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(int(k) for k in key)
            if len(key) != dim or sum(key) != degree or min(key) < 0:
                raise ValueError(f"key {key} is not a {dim}-part composition of {degree}")
            c = spec.reduce(c)
            if c != 0:
                clean[key] = c
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def _raw(cls, spec, dim, degree, coeffs):
        # trusted constructor: keys valid, values canonical and non-zero
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, spec: FieldSpec, dim: int, degree: int):
        return cls._raw(spec, dim, degree, {})

    @classmethod
    def from_vector(cls, spec: FieldSpec, dim: int, degree: int, vec: Sequence):
        basis = compositions(degree, dim)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match the basis size")
        return cls(spec, dim, degree, dict(zip(basis, vec)))

    def to_vector(self) -> list:
        zero = self.spec.zero
        return [self.coeffs.get(a, zero) for a in compositions(self.degree, self.dim)]

    def coeff(self, parts: Sequence[int]) -> Scalar:
        return Scalar(self.spec, self.coeffs.get(tuple(parts), self.spec.zero))

    @property
    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same_space(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if (other.spec, other.dim, other.degree) != (self.spec, self.dim, self.degree):
            raise ValueError("elements live in different spaces")

    def __add__(self, other):
        self._same_space(other)
        F = self.spec
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = F.add(out.get(k, F.zero), c)
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return self._raw(F, self.dim, self.degree, out)

    def __neg__(self):
        F = self.spec
        return self._raw(F, self.dim, self.degree, {k: F.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.spec
        c = F.reduce(c)
        if c == 0:
            return self.zero(F, self.dim, self.degree)
        return self._raw(F, self.dim, self.degree, {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Scalar)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.spec, self.dim, self.degree, self.coeffs) == (other.spec, other.dim, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.kind, self.spec, self.dim, self.degree, frozenset(self.coeffs.items())))

    def ratio_to(self, other):
        """Raw ``c`` with ``self == c * other`` and ``c != 0``, else ``None``."""
        self._same_space(other)
        if self.coeffs.keys() != other.coeffs.keys() or not self.coeffs:
            return None
        F = self.spec
        it = iter(self.coeffs.items())
        k0, c0 = next(it)
        ratio = F.div(c0, other.coeffs[k0])
        for k, c in it:
            if c != F.mul(ratio, other.coeffs[k]):
                return None
        return ratio

    def is_proportional(self, other) -> bool:
        return self.ratio_to(other) is not None

    def normalized(self):
        """Rescaled so the first non-zero coefficient in basis order is 1."""
        if not self.coeffs:
            return self
        index = composition_index(self.degree, self.dim)
        lead = min(self.coeffs, key=index.__getitem__)
        return self.scale(self.spec.inv(self.coeffs[lead]))

    def to_json(self) -> dict:
        F = self.spec
        index = composition_index(self.degree, self.dim)
        terms = [[list(k), F.encode(self.coeffs[k])] for k in sorted(self.coeffs, key=index.__getitem__)]
        return {"kind": self.kind, "char": F.characteristic, "dim": self.dim, "degree": self.degree, "terms": terms}

    def __repr__(self):
        if not self.coeffs:
            return f"{type(self).__name__}(0)"
        index = composition_index(self.degree, self.dim)
        parts = [f"{self.spec.encode(self.coeffs[k])}*{self._label(k)}"
                 for k in sorted(self.coeffs, key=index.__getitem__)]
        return " + ".join(parts)


class GammaElement(_SparseTensor):
    """Element of Γⁿ(F^d) in the monomial symbol basis."""

    kind = "gamma"
    __slots__ = ()

    @staticmethod
    def _label(k):
        return "".join(f"[e{i + 1}]_{a}" for i, a in enumerate(k) if a) or "1"

    def __mul__(self, other):
        if isinstance(other, GammaElement):
            return gamma_mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented


class SymElement(_SparseTensor):
    """Element of Symⁿ(F^d) in the monomial basis."""

    kind = "sym"
    __slots__ = ()

    @staticmethod
    def _label(k):
        return "".join(f"e{i + 1}^{a}" if a > 1 else f"e{i + 1}" for i, a in enumerate(k) if a) or "1"

    def __mul__(self, other):
        if isinstance(other, SymElement):
            return sym_mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented


def element_from_json(obj: Mapping) -> _SparseTensor:
    cls = {"gamma": GammaElement, "sym": SymElement}[obj["kind"]]
    spec = FieldSpec(int(obj["char"]))
    coeffs = {tuple(k): spec.decode(v) for k, v in obj["terms"]}
    return cls(spec, int(obj["dim"]), int(obj["degree"]), coeffs)


# ---------------------------------------------------------------------------
# constructors and products
# ---------------------------------------------------------------------------


def _vector(spec: FieldSpec, v: Iterable) -> tuple:
    return tuple(spec.reduce(c) for c in v)


def basis_symbol(spec: FieldSpec, parts: Sequence[int]) -> GammaElement:
    parts = tuple(parts)
    return GammaElement._raw(spec, len(parts), sum(parts), {parts: spec.one})


def monomial(spec: FieldSpec, parts: Sequence[int]) -> SymElement:
    parts = tuple(parts)
    return SymElement._raw(spec, len(parts), sum(parts), {parts: spec.one})


def pure_symbol(spec: FieldSpec, v: Sequence, n: int) -> GammaElement:
    """The pure symbol ``[v]_n``."""
    v = _vector(spec, v)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return GammaElement._raw(spec, len(v), n, _pure_terms(spec, v, n))


def veronese(spec: FieldSpec, v: Sequence, n: int) -> GammaElement:
    v = _vector(spec, v)
    if all(c == 0 for c in v):
        raise ValueError("the Veronese map is undefined at v = 0")
    return pure_symbol(spec, v, n)


def gamma_mul(x: GammaElement, y: GammaElement) -> GammaElement:
    if x.dim != y.dim or x.spec != y.spec:
        raise ValueError("factors must share dimension and field")
    return GammaElement._raw(x.spec, x.dim, x.degree + y.degree, _gamma_mul_terms(x.spec, x.coeffs, y.coeffs))


def sym_linear(spec: FieldSpec, v: Sequence) -> SymElement:
    v = _vector(spec, v)
    d = len(v)
    coeffs = {tuple(1 if j == i else 0 for j in range(d)): c for i, c in enumerate(v) if c != 0}
    return SymElement._raw(spec, d, 1, coeffs)


def sym_mul(x: SymElement, y: SymElement) -> SymElement:
    if x.dim != y.dim or x.spec != y.spec:
        raise ValueError("factors must share dimension and field")
    return SymElement._raw(x.spec, x.dim, x.degree + y.degree, _sym_mul_terms(x.spec, x.coeffs, y.coeffs))


def pairing(phi: GammaElement, x: SymElement) -> Scalar:
    """Pairing Γⁿ(V^∨) x Symⁿ(V) -> F with the two monomial bases dual."""
    if not isinstance(phi, GammaElement) or not isinstance(x, SymElement):
        raise TypeError("pairing takes a GammaElement and a SymElement")
    if phi.dim != x.dim or phi.degree != x.degree:
        raise ValueError("dimension or degree mismatch")
    if phi.spec != x.spec:
        raise ValueError("field mismatch")
    F = phi.spec
    acc = F.zero
    small, big = (phi.coeffs, x.coeffs) if len(phi.coeffs) <= len(x.coeffs) else (x.coeffs, phi.coeffs)
    for k, c in small.items():
        other = big.get(k)
        if other is not None:
            acc = F.add(acc, F.mul(c, other))
    return Scalar(F, acc)


def _factorial_prod(a: tuple) -> int:
    out = 1
    for ai in a:
        out *= math.factorial(ai)
    return out


def sym_to_gamma(x: SymElement) -> GammaElement:
    """``v_1 ... v_n -> [v_1]_1 ... [v_n]_1``; on the basis ``e^a -> (prod a_i!) [e]_a``."""
    F = x.spec
    out = {}
    for a, c in x.coeffs.items():
        c = F.mul(c, F.from_int(_factorial_prod(a)))
        if c != 0:
            out[a] = c
    return GammaElement._raw(F, x.dim, x.degree, out)


def gamma_to_sym(y: GammaElement) -> SymElement:
    """``[v]_n -> v^n``; on the basis ``[e]_a -> multinomial(a) e^a``."""
    F = y.spec
    out = {}
    for a, c in y.coeffs.items():
        c = F.mul(c, F.from_int(multinomial(a)))
        if c != 0:
            out[a] = c
    return SymElement._raw(F, y.dim, y.degree, out)


def _diagonal_matrix(spec: FieldSpec, values: Sequence[int]) -> FieldMatrix:
    n = len(values)
    return FieldMatrix(spec, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])


def sym_to_gamma_matrix(spec: FieldSpec, n: int, d: int) -> FieldMatrix:
    return _diagonal_matrix(spec, [_factorial_prod(a) for a in compositions(n, d)])


def gamma_to_sym_matrix(spec: FieldSpec, n: int, d: int) -> FieldMatrix:
    return _diagonal_matrix(spec, [multinomial(a) for a in compositions(n, d)])


# ---------------------------------------------------------------------------
# GL(V) and End(V) actions
# ---------------------------------------------------------------------------


def _square(g: FieldMatrix) -> int:
    m, n = g.shape
    if m != n:
        raise ValueError("expected a square matrix")
    return n


def induced_gl_action(g: FieldMatrix, n: int) -> FieldMatrix:
    """Matrix of ``Γⁿ(g)`` in the composition basis (pure-symbol route)."""
    d = _square(g)
    F = g.spec
    gcols = g.columns()
    basis = compositions(n, d)
    index = composition_index(n, d)
    cache: dict = {}
    rows = [[F.zero] * len(basis) for _ in basis]
    for j, a in enumerate(basis):
        for b, c in _induced_column(F, gcols, a, cache).items():
            rows[index[b]][j] = c
    return FieldMatrix(F, rows)


def _apply_swap(x: dict, i: int, j: int) -> dict:
    out = {}
    for a, c in x.items():
        b = list(a)
        b[i], b[j] = b[j], b[i]
        out[tuple(b)] = c
    return out


def _apply_scale(F: FieldSpec, x: dict, i: int, lam) -> dict:
    out = {}
    for a, c in x.items():
        c = F.mul(c, F.pow(lam, a[i]))
        if c != 0:
            out[a] = c
    return out


def _apply_transvection(F: FieldSpec, x: dict, i: int, j: int, mu) -> dict:
    # g = I + mu*E_ij sends e_j -> e_j + mu e_i, so
    # [e]_a -> sum_t mu^t C(a_i + t, t) [e]_{a + t e_i - t e_j}
    out: dict = {}
    for a, c in x.items():
        mu_t = F.one
        for t in range(a[j] + 1):
            k = F.from_int(math.comb(a[i] + t, t))
            term = F.mul(c, F.mul(mu_t, k))
            if term != 0:
                b = list(a)
                b[i] += t
                b[j] -= t
                b = tuple(b)
                s = F.add(out.get(b, F.zero), term)
                if s == 0:
                    out.pop(b, None)
                else:
                    out[b] = s
            mu_t = F.mul(mu_t, mu)
            if mu_t == 0:
                break
    return out


def _elementary_factors(g: FieldMatrix) -> list[tuple]:
    """Elementary matrices ``E_1, ..., E_k`` with ``g = E_1 E_2 ... E_k``."""
    F = g.spec
    n = _square(g)
    R = [list(r) for r in g.rows]
    inverse_ops = []  # row ops applied to g, recorded as their inverses
    for c in range(n):
        piv = next((r for r in range(c, n) if R[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != c:
            R[c], R[piv] = R[piv], R[c]
            inverse_ops.append(("swap", c, piv))
        lam = R[c][c]
        if lam != F.one:
            inv = F.inv(lam)
            R[c] = [F.mul(inv, v) for v in R[c]]
            inverse_ops.append(("scale", c, lam))
        for r in range(n):
            if r != c and R[r][c] != 0:
                f = R[r][c]
                R[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(R[r], R[c])]
                # row_r -= f row_c  is  (I - f E_rc); its inverse is I + f E_rc
                inverse_ops.append(("add", r, c, f))
    return inverse_ops


def act(g: FieldMatrix, x: GammaElement) -> GammaElement:
    """``Γⁿ(g) x`` without building the induced matrix.

    ``g`` is factored into elementary matrices, each of which moves a basis
    symbol to at most ``n + 1`` symbols.
    """
    d = _square(g)
    if d != x.dim or g.spec != x.spec:
        raise ValueError("matrix and tensor do not match")
    F = g.spec
    coeffs = dict(x.coeffs)
    # g = E_1 ... E_k, so apply E_k first
    for op in reversed(_elementary_factors(g)):
        if op[0] == "swap":
            coeffs = _apply_swap(coeffs, op[1], op[2])
        elif op[0] == "scale":
            coeffs = _apply_scale(F, coeffs, op[1], op[2])
        else:
            _, r, c, f = op
            coeffs = _apply_transvection(F, coeffs, r, c, f)
    return GammaElement._raw(F, x.dim, x.degree, coeffs)


def _derive_terms(F: FieldSpec, u_rows: Sequence[Sequence], x: Mapping) -> dict:
    # E_ij: [e]_a -> (a_i - [i == j] + 1) [e]_{a - e_j + e_i}
    d = len(u_rows)
    out: dict = {}
    for a, c in x.items():
        for j in range(d):
            if a[j] == 0:
                continue
            for i in range(d):
                uij = u_rows[i][j]
                if uij == 0:
                    continue
                k = a[i] + 1 if i != j else a[i]
                term = F.mul(c, F.mul(uij, F.from_int(k)))
                if term == 0:
                    continue
                b = list(a)
                b[j] -= 1
                b[i] += 1
                b = tuple(b)
                s = F.add(out.get(b, F.zero), term)
                if s == 0:
                    out.pop(b, None)
                else:
                    out[b] = s
    return out


def derive(u: FieldMatrix, x: GammaElement) -> GammaElement:
    """Infinitesimal action of ``u in End(V)`` on ``x``: the eps-part of ``(1 + eps u) x``."""
    d = _square(u)
    if d != x.dim or u.spec != x.spec:
        raise ValueError("matrix and tensor do not match")
    return GammaElement._raw(x.spec, d, x.degree, _derive_terms(x.spec, u.rows, x.coeffs))


def derivation_action(u: FieldMatrix, n: int) -> FieldMatrix:
    d = _square(u)
    F = u.spec
    basis = compositions(n, d)
    index = composition_index(n, d)
    rows = [[F.zero] * len(basis) for _ in basis]
    for j, a in enumerate(basis):
        for b, c in _derive_terms(F, u.rows, {a: F.one}).items():
            rows[index[b]][j] = c
    return FieldMatrix(F, rows)


def dual_number_derivation(u: FieldMatrix, n: int, algebra: LocalAlgebra | None = None) -> FieldMatrix:
    """eps-coefficient of ``Γⁿ(Id + eps u)``, computed with dual-number coefficients.

    Independent of :func:`derivation_action`: it expands the pure symbols
    ``[e_i + eps u e_i]_{a_i}`` over ``F[eps]`` and multiplies them out.
    """
    d = _square(u)
    F = u.spec
    A = algebra or make_dual_numbers(F)
    if A.dim != 2 or A.base != F:
        raise ValueError("expected the dual numbers over the matrix field")
    gcols = []
    for j in range(d):
        col = []
        for i in range(d):
            col.append((F.one if i == j else F.zero, u.rows[i][j]))
        gcols.append(col)
    basis = compositions(n, d)
    index = composition_index(n, d)
    cache: dict = {}
    rows = [[F.zero] * len(basis) for _ in basis]
    for j, a in enumerate(basis):
        for b, c in _induced_column(A, gcols, a, cache).items():
            rows[index[b]][j] = c[1]
    return FieldMatrix(F, rows)
