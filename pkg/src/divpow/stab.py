"""
Stabilizers of lines and subspaces of Γⁿ(V) under GL(V) and PGL(V).

Two levels are covered:

* Lie level: solve ``derive(u) x = c x`` (or ``derive(u) L ⊂ L``) for
  ``u in End(V)``.  The scalar family ``(λ Id, nλ)`` always solves the line
  problem, so the PGL stabilizer is infinitesimally trivial exactly when
  the solution space is one-dimensional.
* F_q-points: enumerate GL_d(F_q) and keep the ``g`` with ``g x ∈ F^* x``.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Sequence

from .gamma import GammaElement, act, derivation_action, derive, gamma_dim, pure_symbol
from .linalg import FieldMatrix, nullspace, rank
from .scalars import FieldSpec, Scalar

__all__ = [
    "LieStabReport",
    "PointStabReport",
    "EnumerationGuardError",
    "enumeration_guard",
    "lie_stab_line",
    "lie_stab_subspace",
    "brute_point_stab_line",
    "gl_elements",
    "veronese_tangency_check",
    "TangencyReport",
]

GUARD_ENV = "DIVPOW_ENUM_GUARD"
DEFAULT_GUARD = 10**7


class EnumerationGuardError(RuntimeError):
    pass


def enumeration_guard() -> int:
    return int(os.environ.get(GUARD_ENV, DEFAULT_GUARD))


def _elem_unit(spec: FieldSpec, d: int, i: int, j: int) -> FieldMatrix:
    return FieldMatrix(spec, [[1 if (r, c) == (i, j) else 0 for c in range(d)] for r in range(d)])


def _u_from_vector(spec: FieldSpec, d: int, vec: Sequence) -> FieldMatrix:
    return FieldMatrix(spec, [vec[i * d:(i + 1) * d] for i in range(d)])


@dataclass
class LieStabReport:
    """Solution space of the linearized stabilizer condition.

    For a line, ``basis`` holds pairs ``(u, c)``; for a subspace ``c`` is
    ``None``.  ``dimension`` counts the scalar direction.
    """

    dimension: int
    basis: list
    pgl_trivial: bool
    kind: str = "line"

    @property
    def pgl_dimension(self) -> int:
        return self.dimension - 1

    def to_json(self) -> dict:
        out = []
        for u, c in self.basis:
            out.append({"u": u.to_json(), "c": None if c is None else u.spec.encode(c.value)})
        return {"kind": self.kind, "dimension": self.dimension, "pgl_dimension": self.pgl_dimension,
                "pgl_trivial": self.pgl_trivial, "basis": out}


def _coordinate_columns(columns: Sequence[GammaElement]) -> tuple[list, list[list]]:
    keys = sorted(set().union(*(c.coeffs.keys() for c in columns)))
    F = columns[0].spec
    return keys, [[col.coeffs.get(k, F.zero) for col in columns] for k in keys]


def lie_stab_line(x: GammaElement) -> LieStabReport:
    if x.is_zero():
        raise ValueError("the stabilizer of the zero tensor is not a line stabilizer")
    F, d = x.spec, x.dim
    columns = [derive(_elem_unit(F, d, i, j), x) for i in range(d) for j in range(d)]
    columns.append(-x)
    _, rows = _coordinate_columns(columns)
    sols = nullspace(F, rows, d * d + 1)
    basis = [(_u_from_vector(F, d, v[:-1]), Scalar(F, v[-1])) for v in sols]
    return LieStabReport(len(sols), basis, len(sols) == 1, kind="line")


def lie_stab_subspace(L: Sequence[GammaElement]) -> LieStabReport:
    """``{u : derive(u) L ⊂ L}`` for ``L`` spanned by the given elements."""
    if not L:
        raise ValueError("empty subspace")
    F, d, n = L[0].spec, L[0].dim, L[0].degree
    if any((ell.spec, ell.dim, ell.degree) != (F, d, n) for ell in L):
        raise ValueError("spanning elements must live in one Γⁿ(F^d)")
    if rank(F, [ell.to_vector() for ell in L]) != len(L):
        raise ValueError("spanning list is linearly dependent")

    units = [_elem_unit(F, d, i, j) for i in range(d) for j in range(d)]
    images = [[derive(e, ell) for e in units] for ell in L]
    keys = sorted(set().union(*(ell.coeffs.keys() for ell in L),
                              *(im.coeffs.keys() for row in images for im in row)))
    # rows of `annihilator` cut out span(L) inside the coordinates `keys`
    Lmat = [[ell.coeffs.get(k, F.zero) for k in keys] for ell in L]
    annihilator = nullspace(F, Lmat, len(keys))
    equations = []
    for row in images:
        vecs = [[im.coeffs.get(k, F.zero) for k in keys] for im in row]
        for w in annihilator:
            eq = []
            for vec in vecs:
                acc = F.zero
                for wi, vi in zip(w, vec):
                    if wi != 0 and vi != 0:
                        acc = F.add(acc, F.mul(wi, vi))
                eq.append(acc)
            equations.append(eq)
    sols = nullspace(F, equations, d * d)
    basis = [(_u_from_vector(F, d, v), None) for v in sols]
    return LieStabReport(len(sols), basis, len(sols) == 1, kind="subspace")


@dataclass
class PointStabReport:
    scanned: int
    elements: list = field(default_factory=list)
    enumerated: int = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def trivial(self) -> bool:
        return self.order == 1

    def to_json(self) -> dict:
        return {"scanned": self.scanned, "enumerated": self.enumerated, "order": self.order,
                "trivial": self.trivial, "elements": [g.to_json() for g in self.elements]}


def gl_elements(spec: FieldSpec, d: int):
    """GL_d(F_q) in row-major odometer order, singular matrices skipped."""
    if not spec.is_finite:
        raise ValueError("GL_d can only be enumerated over a finite field")
    q = spec.characteristic
    total = q ** (d * d)
    if total > enumeration_guard():
        raise EnumerationGuardError(f"{total} matrices exceed the enumeration guard {enumeration_guard()}")
    for entries in itertools.product(range(q), repeat=d * d):
        rows = [entries[i * d:(i + 1) * d] for i in range(d)]
        g = FieldMatrix(spec, rows)
        if g.rank() == d:
            yield g


def _normalize_mod_scalars(g: FieldMatrix) -> FieldMatrix:
    F = g.spec
    lead = next(v for r in g.rows for v in r if v != 0)
    return g.scale(F.inv(lead))


def brute_point_stab_line(x: GammaElement, q: int | None = None) -> PointStabReport:
    """All of PGL_d(F_q) fixing the line through ``x``, by enumeration."""
    F = x.spec
    if q is not None and q != F.characteristic:
        raise ValueError(f"tensor is defined over {F!r}, not GF({q})")
    if x.is_zero():
        raise ValueError("zero tensor")
    d = x.dim
    total = F.characteristic ** (d * d) if F.is_finite else None
    seen = []
    keys = set()
    scanned = 0
    for g in gl_elements(F, d):
        scanned += 1
        if act(g, x).ratio_to(x) is not None:
            rep = _normalize_mod_scalars(g)
            if rep.rows not in keys:
                keys.add(rep.rows)
                seen.append(rep)
    return PointStabReport(scanned, seen, total)


@dataclass
class TangencyReport:
    samples: int
    induced_failures: int
    random_trials: int
    random_failures: int
    seed: int

    @property
    def sound(self) -> bool:
        return self.induced_failures == 0

    @property
    def random_failure_rate(self) -> float:
        return self.random_failures / self.random_trials if self.random_trials else 0.0

    def to_json(self) -> dict:
        return {"samples": self.samples, "induced_failures": self.induced_failures,
                "random_trials": self.random_trials, "random_failures": self.random_failures,
                "random_failure_rate": self.random_failure_rate, "seed": self.seed}


def _tangent_span(F: FieldSpec, v, n: int) -> list[list]:
    d = len(v)
    vn1 = pure_symbol(F, v, n - 1)
    span = [(pure_symbol(F, [1 if j == i else 0 for j in range(d)], 1) * vn1).to_vector() for i in range(d)]
    span.append(pure_symbol(F, v, n).to_vector())
    return span


def _in_span(F: FieldSpec, span: list[list], y: list) -> bool:
    return rank(F, span + [y]) == rank(F, span)


def veronese_tangency_check(d: int, n: int, samples: int, spec: FieldSpec,
                            seed: int = 0, random_maps: int | None = None) -> TangencyReport:
    """Probe whether endomorphisms of Γⁿ(V) keep the Veronese variety tangent.

    Infinitesimal actions induced from ``End(V)`` must send every sampled
    ``[v]_n`` into the tangent space at that point.  Random matrices on
    Γⁿ(V) are tested the same way and their failure count reported; this is
    statistics, not a proof of rigidity.
    """
    rng = random.Random(seed)
    F = spec
    points = []
    while len(points) < samples:
        v = [F.random(rng) for _ in range(d)]
        if any(c != 0 for c in v):
            points.append(v)
    spans = [_tangent_span(F, v, n) for v in points]
    symbols = [pure_symbol(F, v, n).to_vector() for v in points]

    induced_failures = 0
    for v, span, sym in zip(points, spans, symbols):
        u = FieldMatrix(F, [[F.random(rng) for _ in range(d)] for _ in range(d)])
        image = derivation_action(u, n) @ sym
        if not _in_span(F, span, image):
            induced_failures += 1

    N = gamma_dim(n, d)
    trials = samples if random_maps is None else random_maps
    random_failures = 0
    for _ in range(trials):
        U = FieldMatrix(F, [[F.random(rng) for _ in range(N)] for _ in range(N)])
        if any(not _in_span(F, span, U @ sym) for span, sym in zip(spans, symbols)):
            random_failures += 1
    return TangencyReport(samples, induced_failures, trials, random_failures, seed)
