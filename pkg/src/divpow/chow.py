"""
Degree <= 2 model of the Chow ring of P^N blown up along two disjoint centers.

Coordinates follow the blow-up decompositions:

* ``CH^1 = Z·β*H ⊕ Z·E_1 ⊕ Z·E_2``;
* ``CH^2 = Z·(β*H)^2 ⊕ Pic(E_1) ⊕ Pic(E_2)`` with ``Pic(E_i) = Z·π_i*h_i ⊕ Z·ζ_i``.

Each center is assumed to have Picard group ``Z·h_i`` with ``H|_{Y_i} = deg_i·h_i``
and codimension at least 3, so that the CH^2 splitting holds.  Multiplication
rules: ``H·H = (β*H)^2``, ``H·E_i = deg_i·π_i*h_i``, ``E_i·E_i = -ζ_i`` and
``E_1·E_2 = 0``.

The module also carries the point count of projective bundles over
projective spaces and the exponent-matching argument that follows from it.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

from .scalars import is_prime

__all__ = [
    "BlowupModel",
    "ChowClassDeg1",
    "ChowClassDeg2",
    "H",
    "E1",
    "E2",
    "mul_deg1",
    "phi_iso_search",
    "PhiIsoReport",
    "projective_bundle_count",
    "projective_space_count",
    "is_prime_power",
    "lemend_conclude",
    "LemEndVerdict",
    "exceptional_divisors_distinct",
]


@dataclass(frozen=True)
class BlowupModel:
    N: int
    dims: tuple[int, int]
    degs: tuple[int, int]

    def __post_init__(self):
        if len(self.dims) != 2 or len(self.degs) != 2:
            raise ValueError("exactly two centers are modelled")
        for dim, deg in zip(self.dims, self.degs):
            if dim < 1:
                raise ValueError("centers must be positive-dimensional")
            if self.N - dim < 3:
                raise ValueError(f"center of dimension {dim} has codimension < 3 in P^{self.N}")
            if deg < 1:
                raise ValueError("restriction degrees must be positive")

    @property
    def codims(self) -> tuple[int, int]:
        return (self.N - self.dims[0], self.N - self.dims[1])


@dataclass(frozen=True)
class ChowClassDeg1:
    """``a·β*H + b1·E_1 + b2·E_2``."""

    a: int = 0
    b1: int = 0
    b2: int = 0

    def __add__(self, other):
        return ChowClassDeg1(self.a + other.a, self.b1 + other.b1, self.b2 + other.b2)

    def __neg__(self):
        return ChowClassDeg1(-self.a, -self.b1, -self.b2)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return ChowClassDeg1(k * self.a, k * self.b1, k * self.b2)

    def is_exceptional(self) -> bool:
        return self in (E1, E2)


@dataclass(frozen=True)
class ChowClassDeg2:
    """``h2·(β*H)^2 + y1·π_1*h_1 + z1·ζ_1 + y2·π_2*h_2 + z2·ζ_2``."""

    h2: int = 0
    y1: int = 0
    z1: int = 0
    y2: int = 0
    z2: int = 0

    def __add__(self, other):
        return ChowClassDeg2(*(s + o for s, o in zip(self.astuple(), other.astuple())))

    def __rmul__(self, k: int):
        return ChowClassDeg2(*(k * s for s in self.astuple()))

    def astuple(self) -> tuple:
        return (self.h2, self.y1, self.z1, self.y2, self.z2)

    def block(self, i: int) -> tuple[int, int]:
        """Coordinates in ``Pic(E_i) = Pic(Y_i) ⊕ Z``."""
        return (self.y1, self.z1) if i == 1 else (self.y2, self.z2)

    def is_zero(self) -> bool:
        return not any(self.astuple())


H = ChowClassDeg1(1, 0, 0)
E1 = ChowClassDeg1(0, 1, 0)
E2 = ChowClassDeg1(0, 0, 1)


def _basis_products(model: BlowupModel) -> dict:
    d1, d2 = model.degs
    return {
        (0, 0): ChowClassDeg2(h2=1),
        (0, 1): ChowClassDeg2(y1=d1),
        (0, 2): ChowClassDeg2(y2=d2),
        (1, 1): ChowClassDeg2(z1=-1),
        (2, 2): ChowClassDeg2(z2=-1),
        (1, 2): ChowClassDeg2(),
    }


def mul_deg1(model: BlowupModel, x: ChowClassDeg1, y: ChowClassDeg1) -> ChowClassDeg2:
    table = _basis_products(model)
    xs, ys = (x.a, x.b1, x.b2), (y.a, y.b1, y.b2)
    out = ChowClassDeg2()
    for i, j in itertools.product(range(3), repeat=2):
        k = xs[i] * ys[j]
        if k:
            out = out + k * table[(min(i, j), max(i, j))]
    return out


def _mixed(a: int, b: int, c: int) -> ChowClassDeg1:
    # a·β*H - b·E_1 - c·E_2, the shape of an effective divisor other than E_1, E_2
    return ChowClassDeg1(a, -b, -c)


@dataclass
class PhiIsoReport:
    model: BlowupModel
    bound: int
    branch_i: int = 0
    branch_ii: int = 0
    permutations: int = 0
    unobstructed: list = field(default_factory=list)
    candidates: list = field(default_factory=list)

    @property
    def all_obstructed(self) -> bool:
        return not self.unobstructed

    def to_json(self, detail: bool = True) -> dict:
        out = {
            "model": asdict(self.model),
            "bound": self.bound,
            "branch_i_cases": self.branch_i,
            "branch_ii_cases": self.branch_ii,
            "permutation_cases": self.permutations,
            "unobstructed_nontrivial": self.unobstructed,
            "all_obstructed": self.all_obstructed,
        }
        if detail:
            out["candidates"] = self.candidates
        return out


def phi_iso_search(model: BlowupModel, bound: int) -> PhiIsoReport:
    """Check that no ring automorphism can move ``E_1, E_2`` to mixed classes.

    Any automorphism keeps ``E_1·E_2 = 0``.  Candidates are images
    ``f(E_i) = a_i·β*H - b_i·E_1 - c_i·E_2`` with ``1 <= a_i <= bound``,
    ``0 <= b_i, c_i <= bound``:

    (i)  both images mixed: the ``(β*H)^2`` coefficient is ``a_1·a_2 != 0``;
    (ii) one image is ``E_j``, the other mixed: the ``Pic(Y_j)`` coefficient
         is ``a·deg_j != 0``.

    Images that merely permute ``{E_1, E_2}`` are recorded but not obstructed.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    report = PhiIsoReport(model, bound)
    mixed = [(a, b, c) for a in range(1, bound + 1) for b in range(bound + 1) for c in range(bound + 1)]

    def record(f1, f2, branch, label):
        prod = mul_deg1(model, f1, f2)
        if branch == "i":
            obstructed = prod.h2 != 0
        elif branch == "ii":
            j = 1 if E1 in (f1, f2) else 2
            obstructed = prod.block(j)[0] != 0
        else:
            obstructed = not prod.is_zero()
        entry = {"f(E1)": label[0], "f(E2)": label[1], "branch": branch,
                 "product": list(prod.astuple()), "obstructed": obstructed}
        report.candidates.append(entry)
        if not obstructed and branch != "perm":
            report.unobstructed.append(entry)

    for (a1, b1, c1), (a2, b2, c2) in itertools.product(mixed, repeat=2):
        report.branch_i += 1
        record(_mixed(a1, b1, c1), _mixed(a2, b2, c2), "i", ([a1, b1, c1], [a2, b2, c2]))

    for fixed, name in ((E1, "E1"), (E2, "E2")):
        for a, b, c in mixed:
            report.branch_ii += 2
            record(_mixed(a, b, c), fixed, "ii", ([a, b, c], name))
            record(fixed, _mixed(a, b, c), "ii", (name, [a, b, c]))

    for f1, f2, label in ((E1, E2, ("E1", "E2")), (E2, E1, ("E2", "E1"))):
        report.permutations += 1
        record(f1, f2, "perm", label)
    return report


# ---------------------------------------------------------------------------
# point counting
# ---------------------------------------------------------------------------


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(k for k in range(2, q + 1) if q % k == 0)
    while q % p == 0:
        q //= p
    return q == 1 and is_prime(p)


def projective_space_count(k: int, q: int) -> int:
    """``|P^k(F_q)|``."""
    return (q ** (k + 1) - 1) // (q - 1)


def projective_bundle_count(a: int, m: int, q: int) -> int:
    """Points of a rank-``m`` projective bundle over ``P^{a-1}`` over ``F_q``."""
    if a < 2 or m < 2:
        raise ValueError("need a, m >= 2")
    if not is_prime_power(q):
        raise ValueError(f"{q} is not a prime power")
    num = (q**a - 1) * (q**m - 1)
    den = (q - 1) ** 2
    count, rem = divmod(num, den)
    assert rem == 0
    return count


def _poly_mul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _x_pow_minus_one(k: int) -> list[int]:
    return [-1] + [0] * (k - 1) + [1]


@dataclass(frozen=True)
class LemEndVerdict:
    equal: bool
    swap: bool
    lhs: tuple
    rhs: tuple


def lemend_conclude(a1: int, m1: int, a2: int, m2: int) -> LemEndVerdict:
    """Compare ``(X^a1 - 1)(X^m1 - 1)`` with ``(X^a2 - 1)(X^m2 - 1)`` over Z."""
    if min(a1, m1, a2, m2) < 2:
        raise ValueError("all exponents must be >= 2")
    if a1 == a2:
        raise ValueError("premise a1 != a2 violated")
    lhs = _poly_mul(_x_pow_minus_one(a1), _x_pow_minus_one(m1))
    rhs = _poly_mul(_x_pow_minus_one(a2), _x_pow_minus_one(m2))
    equal = lhs == rhs
    swap = m1 == a2 and m2 == a1
    if equal and sorted((a1, m1)) != sorted((a2, m2)):
        raise AssertionError(f"equal polynomials with distinct exponent multisets: {(a1, m1, a2, m2)}")
    return LemEndVerdict(equal, equal and swap, tuple(lhs), tuple(rhs))


def exceptional_divisors_distinct(w: int, l: int, dim_v: int) -> bool:
    """Whether the exceptional divisors over ``P^{w-1}`` and ``P^{l-1}`` in ``P(F^dim_v)`` differ.

    They are projective bundles of ranks ``dim_v - w`` and ``dim_v - l``;
    equal point counts force ``{w, dim_v - w} = {l, dim_v - l}``.
    """
    if not (2 <= w <= dim_v - 2 and 2 <= l <= dim_v - 2):
        raise ValueError("both centers need dimension >= 1 and codimension >= 2")
    return w != l and w != dim_v - l
