"""Acceptance suite: one test per criterion, exact arithmetic throughout.

Each test asserts its wall-clock budget as well as its mathematical content.
A pass/fail line per criterion is printed at the end of the session.
"""

import itertools
import math
import random
import time

import pytest

from divpow.chow import (E1, E2, BlowupModel, ChowClassDeg1, lemend_conclude, mul_deg1,
                         phi_iso_search, projective_bundle_count)
from divpow.construct import (build_L, build_free_tensor, mult_map_matrix, projective_points,
                              shape_separation_check, tau_eval)
from divpow.gamma import (GammaElement, basis_symbol, gamma_dim, gamma_to_sym_matrix, pairing,
                          pure_symbol, sym_linear, sym_mul, sym_to_gamma_matrix)
from divpow.linalg import FieldMatrix, rank
from divpow.multiindex import carry_count, is_F_disjoint, multinomial_mod_p
from divpow.scalars import GF, QQ, FieldSpec, make_dual_numbers, nakayama_verify
from divpow.stab import brute_point_stab_line, lie_stab_line, lie_stab_subspace

SEED = 20240601


def positive_part_lists(max_sum):
    """Every ordered list of positive integers with sum <= max_sum."""
    yield ()
    for s in range(1, max_sum + 1):
        for cuts in itertools.product((0, 1), repeat=s - 1):
            parts, run = [], 1
            for c in cuts:
                if c:
                    parts.append(run)
                    run = 1
                else:
                    run += 1
            parts.append(run)
            yield tuple(parts)


def big_multinomial(parts):
    return math.factorial(sum(parts)) // math.prod(math.factorial(k) for k in parts)


def valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@pytest.mark.criterion(1, "Kummer/Lucas suite")
def test_criterion_1_kummer_lucas():
    start = time.perf_counter()
    lists = list(positive_part_lists(12))
    # zero parts are allowed too: pad a sample of lists with zeros in every position
    padded = [lst[:i] + (0,) + lst[i:] for lst in lists if len(lst) <= 3 for i in range(len(lst) + 1)]
    cases = 0
    for p in (2, 3, 5):
        for parts in lists + padded:
            big = big_multinomial(parts)
            assert carry_count(parts, p) == valuation(big, p), (parts, p)
            assert multinomial_mod_p(parts, p).value == big % p, (parts, p)
            cases += 1
    assert len(lists) == 2**12
    assert cases == 3 * (len(lists) + len(padded))
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "divided-power relations, pairing, canonical composites")
def test_criterion_2_gamma_relations():
    start = time.perf_counter()
    rng = random.Random(SEED)
    for p in (0, 2, 3, 5):
        F = FieldSpec(p)
        for d in (1, 2, 3):
            for _ in range(40):
                v = [F.random(rng) for _ in range(d)]
                w = [F.random(rng) for _ in range(d)]
                lam = F.random(rng)
                n, m = rng.randint(0, 5), rng.randint(0, 5)
                # [v]_0 = 1
                assert pure_symbol(F, v, 0) == basis_symbol(F, (0,) * d)
                # [v + w]_n = sum_i [v]_i [w]_(n-i)
                rhs = GammaElement.zero(F, d, n)
                for i in range(n + 1):
                    rhs = rhs + pure_symbol(F, v, i) * pure_symbol(F, w, n - i)
                assert pure_symbol(F, [F.add(x, y) for x, y in zip(v, w)], n) == rhs
                # [lam v]_n = lam^n [v]_n
                lv = [F.mul(lam, x) for x in v]
                assert pure_symbol(F, lv, n) == pure_symbol(F, v, n).scale(F.pow(lam, n))
                # [v]_n [v]_m = C(n+m, n) [v]_(n+m)
                lhs = pure_symbol(F, v, n) * pure_symbol(F, v, m)
                assert lhs == pure_symbol(F, v, n + m).scale(math.comb(n + m, n))

            for n in range(1, 5):
                for _ in range(200):
                    phi = [F.random(rng) for _ in range(d)]
                    xs = [[F.random(rng) for _ in range(d)] for _ in range(n)]
                    prod = sym_linear(F, xs[0])
                    for x in xs[1:]:
                        prod = sym_mul(prod, sym_linear(F, x))
                    expect = F.one
                    for x in xs:
                        expect = F.mul(expect, sum((F.mul(a, b) for a, b in zip(phi, x)), F.zero))
                    assert pairing(pure_symbol(F, phi, n), prod) == expect

            for n in range(7):
                S, G = sym_to_gamma_matrix(F, n, d), gamma_to_sym_matrix(F, n, d)
                target = FieldMatrix.identity(F, gamma_dim(n, d)).scale(math.factorial(n))
                assert G @ S == target
                assert S @ G == target
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(3, "free tensor stabilizer over F_2 and Q")
def test_criterion_3_free_tensor():
    start = time.perf_counter()
    ft = build_free_tensor(3, GF(2), (2, 4, 8, 16))
    assert ft.r == 30 and gamma_dim(ft.r, 3) == 496
    assert lie_stab_line(ft.x).dimension == 1
    pts = brute_point_stab_line(ft.x, 2)
    assert pts.scanned == 168
    assert pts.trivial
    ftq = build_free_tensor(3, QQ, (2, 4, 8, 16))
    assert lie_stab_line(ftq.x).dimension == 1
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(4, "multiplication maps and tau injectivity")
def test_criterion_4_divprod():
    start = time.perf_counter()
    maps = 0
    for p in (2, 3):
        F = GF(p)
        for d in (1, 2, 3):
            for a in range(1, 12):
                for b in range(1, 13 - a):
                    if not is_F_disjoint([a, b], p):
                        continue
                    for y in projective_points(F, d):
                        mm = mult_map_matrix(y, a, b, F)
                        assert mm.rank == gamma_dim(a, d), (p, d, a, b, y)
                        maps += 1
    assert maps > 0

    F = GF(3)
    pts = projective_points(F, 2)
    values = [(tup, tau_eval(F, tup, (3, 9))) for tup in itertools.product(pts, repeat=2)]
    assert len(values) == 16
    for (t1, x1), (t2, x2) in itertools.combinations(values, 2):
        assert not x1.is_zero()
        assert not x1.is_proportional(x2), (t1, t2)
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(5, "Chow products and automorphism obstruction")
def test_criterion_5_chow():
    start = time.perf_counter()
    model = BlowupModel(10, (2, 3), (1, 5))
    assert mul_deg1(model, E1, E2).is_zero()
    assert mul_deg1(model, E1, E1).block(1) == (0, -1)
    assert mul_deg1(model, E2, E2).block(2) == (0, -1)
    for a1, c1 in itertools.product(range(1, 6), range(0, 6)):
        prod = mul_deg1(model, ChowClassDeg1(a1, 0, -c1), E2)
        assert prod.block(2) == (a1 * 5, c1)
    rep = phi_iso_search(model, 3)
    assert rep.branch_i == 9 * 16**2
    assert rep.unobstructed == []
    assert time.perf_counter() - start < 10


@pytest.mark.criterion(6, "projective bundle counts and exponent matching")
def test_criterion_6_lemend():
    start = time.perf_counter()
    for q in (2, 3, 4, 5, 8, 9):
        for a, m in itertools.product(range(2, 9), repeat=2):
            assert projective_bundle_count(a, m, q) * (q - 1) ** 2 == (q**a - 1) * (q**m - 1)
    for a1, m1, a2, m2 in itertools.product(range(2, 11), repeat=4):
        if a1 == a2:
            continue
        v = lemend_conclude(a1, m1, a2, m2)
        # degree <= 20 integer polynomials: agreement at 21 points decides equality
        same = all((q**a1 - 1) * (q**m1 - 1) == (q**a2 - 1) * (q**m2 - 1) for q in range(2, 23))
        assert v.equal == same
        assert v.equal == (a1 == m2 and m1 == a2)
    v = lemend_conclude(2, 3, 3, 2)
    assert v.equal and v.swap
    assert time.perf_counter() - start < 10


@pytest.mark.criterion(7, "Tannakian construction: shapes, L, stabilizers")
def test_criterion_7_tannaka():
    start = time.perf_counter()
    for p in (0, 2, 3):
        for m in range(1, 9):
            for w in (2, 3, 4):
                rep = shape_separation_check(m, p, w)
                assert rep.certified and rep.both == 0 and rep.n < 2 * rep.q

    w0 = (0, 0, 0, 1)
    for p in (0, 2, 3):
        F = FieldSpec(p)
        toys = [
            [basis_symbol(F, tuple(2 if j == i else 0 for j in range(4))) for i in range(4)],
            [basis_symbol(F, a) for a in [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0),
                                         (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)]],
        ]
        for L_Z in toys:
            td = build_L(L_Z, w0, F)
            assert len(td.L) == len(L_Z)
            assert all(not ell.is_zero() for ell in td.L)
            before, after = lie_stab_subspace(L_Z), lie_stab_subspace(list(td.L))
            assert before.dimension == after.dimension
            # both contain the scalar line
            for rep in (before, after):
                vecs = [[v for row in u.rows for v in row] for u, _ in rep.basis]
                ident = [int(i == j) for i in range(4) for j in range(4)]
                assert rank(F, vecs + [ident]) == rank(F, vecs)
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(8, "Artinian Nakayama over F_2[eps]")
def test_criterion_8_nakayama():
    start = time.perf_counter()
    A = make_dual_numbers(GF(2))
    elems = list(A.elements())
    module = list(itertools.product([e.coords for e in elems], repeat=2))
    exercised = {"surjective": 0, "injective": 0}
    for entries in itertools.product(elems, repeat=4):
        Phi = [list(entries[:2]), list(entries[2:])]
        # independent oracle: the full image and kernel of Phi on A^2
        image, kernel = set(), 0
        for x in module:
            y = tuple(A.add(A.mul(Phi[r][0].coords, x[0]), A.mul(Phi[r][1].coords, x[1])) for r in range(2))
            image.add(y)
            kernel += all(A.is_zero(c) for c in y)
        residue = [[e.residue().value for e in row] for row in Phi]
        residue_invertible = (residue[0][0] * residue[1][1] + residue[0][1] * residue[1][0]) % 2 == 1
        for mode in ("surjective", "injective"):
            rep = nakayama_verify(Phi, mode)
            if residue_invertible:
                exercised[mode] += 1
                assert rep.status == "pass", (mode, rep.to_json())
                if mode == "surjective":
                    assert len(image) == 16
                else:
                    assert kernel == 1
            else:
                assert rep.status == "precondition-failed"
    # GL_2(F_2) has 6 elements, each residue lifts in 2^4 ways
    assert exercised == {"surjective": 96, "injective": 96}
    assert time.perf_counter() - start < 30
