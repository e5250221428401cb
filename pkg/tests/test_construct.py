import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from divpow.construct import (build_L, build_free_tensor, diagonal_block_size, diagonal_embed,
                              fixed_point_w0, mult_map_matrix, projective_points,
                              shape_separation_check, shift_power, tau_eval, tau_injectivity_check)
from divpow.gamma import basis_symbol, gamma_dim, pure_symbol, veronese
from divpow.linalg import FieldMatrix
from divpow.multiindex import compositions, is_F_disjoint, multinomial, multinomial_mod_p
from divpow.scalars import GF, QQ, FieldSpec
from divpow.stab import lie_stab_subspace


def torus_toy(F):
    return [basis_symbol(F, tuple(2 if j == i else 0 for j in range(4))) for i in range(4)]


def mixed_toy(F):
    parts = [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)]
    return [basis_symbol(F, a) for a in parts]


# ---------------------------------------------------------------------------
# free tensor
# ---------------------------------------------------------------------------


def test_free_tensor_defaults():
    ft = build_free_tensor(3, GF(2))
    assert ft.a == (2, 4, 8, 16)
    assert ft.r == 30
    js = ft.to_json()
    assert js["ambient_dim"] == 496 == gamma_dim(30, 3)
    assert js["a"] == [2, 4, 8, 16]
    assert build_free_tensor(3, GF(3)).a == (3, 9, 27, 81)


def test_free_tensor_validation():
    with pytest.raises(ValueError):
        build_free_tensor(2, GF(2))
    with pytest.raises(ValueError):
        build_free_tensor(3, GF(2), [2, 4, 8])
    with pytest.raises(ValueError):
        build_free_tensor(3, GF(2), [2, 4, 6, 16])


def test_free_tensor_support_size_frozen():
    # computed once and frozen
    assert len(build_free_tensor(3, GF(2)).x) == 34
    assert len(build_free_tensor(3, QQ).x) == 153


def test_free_tensor_is_product_of_points():
    ft = build_free_tensor(3, QQ)
    x = pure_symbol(QQ, [1, 0, 0], 0)
    for v, k in zip(ft.points, ft.a):
        x = x * pure_symbol(QQ, v, k)
    assert x == ft.x


# ---------------------------------------------------------------------------
# multiplication maps
# ---------------------------------------------------------------------------


def test_mult_map_basis_vector_formula():
    # ([e]_a) [e_d]_b = C(a_d + b, b) [e]_{a + b e_d}
    F = QQ
    a, b, d = 3, 4, 3
    mm = mult_map_matrix([0, 0, 1], a, b, F)
    rows, cols = compositions(a + b, d), compositions(a, d)
    for j, c in enumerate(cols):
        target = c[:-1] + (c[-1] + b,)
        for i, r in enumerate(rows):
            expect = math.comb(c[-1] + b, b) if r == target else 0
            assert mm.matrix[i, j] == expect


@pytest.mark.parametrize("p", [2, 3])
def test_mult_map_injective_exhaustive(p):
    F = GF(p)
    for d in (1, 2, 3):
        for a, b in itertools.product(range(1, 12), repeat=2):
            if a + b > 12 or not is_F_disjoint([a, b], p):
                continue
            for y in projective_points(F, d):
                mm = mult_map_matrix(y, a, b, F)
                assert mm.disjoint and mm.full_column_rank


def test_mult_map_non_disjoint_may_drop_rank():
    mm = mult_map_matrix([1, 0], 1, 1, GF(2))
    assert not mm.disjoint
    assert mm.rank < mm.matrix.ncols


def test_mult_map_zero_y():
    with pytest.raises(ValueError):
        mult_map_matrix([0, 0], 1, 2, GF(3))


# ---------------------------------------------------------------------------
# tau
# ---------------------------------------------------------------------------


@given(st.sampled_from([0, 2, 3, 5]), st.lists(st.integers(1, 9), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_tau_on_diagonal(p, a, v):
    F = FieldSpec(p)
    v = [F.reduce(c) for c in v]
    if all(c == 0 for c in v):
        return
    got = tau_eval(F, [v] * len(a), a)
    expect = veronese(F, v, sum(a)).scale(multinomial(a))
    assert got == expect
    if p and is_F_disjoint(a, p):
        # no carries, so the constant is 1 in F
        assert multinomial_mod_p(a, p) == 1
        assert got == veronese(F, v, sum(a))


def test_tau_injective_F3():
    rep = tau_injectivity_check(GF(3), 2, (3, 9))
    assert rep["tuples"] == 16
    assert rep["distinct_lines"] == 16
    assert rep["injective"]


def test_tau_symmetric_exponents_collide():
    rep = tau_injectivity_check(GF(3), 2, (1, 1))
    assert not rep["injective"]
    assert len(rep["collisions"]) == 6


def test_tau_errors():
    with pytest.raises(ValueError):
        tau_eval(QQ, [[1, 0]], [1, 2])
    with pytest.raises(ValueError):
        tau_eval(QQ, [[0, 0]], [1])
    with pytest.raises(ValueError):
        projective_points(QQ, 2)


def test_projective_points_count():
    for p in (2, 3, 5):
        for d in (1, 2, 3):
            assert len(projective_points(GF(p), d)) == (p**d - 1) // (p - 1)


# ---------------------------------------------------------------------------
# Tannakian side
# ---------------------------------------------------------------------------


def test_shift_power():
    assert shift_power(2, 2) == 4
    assert shift_power(1, 0) == 2
    assert shift_power(3, 3) == 9
    assert shift_power(4, 5) == 5
    with pytest.raises(ValueError):
        shift_power(0, 2)
    with pytest.raises(ValueError):
        shift_power(2, 4)


@given(st.integers(1, 40), st.sampled_from([0, 2, 3, 5, 7]))
def test_shift_power_properties(m, p):
    q = shift_power(m, p)
    assert q > m
    assert m + q < 2 * q
    if p:
        assert q // p <= m
        assert p ** round(math.log(q, p)) == q


def test_shape_examples():
    rep = shape_separation_check(2, 2, 2)
    assert (rep.n, rep.q) == (6, 4)
    assert rep.certified
    rep = shape_separation_check(1, 0, 3)
    assert (rep.n, rep.q, rep.total) == (3, 2, 10)
    assert rep.certified


@given(st.integers(1, 8), st.sampled_from([0, 2, 3]), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_shape_always_certifies(m, p, w):
    rep = shape_separation_check(m, p, w)
    assert rep.both == 0 and rep.certified
    assert rep.total == gamma_dim(rep.n, w)


def test_shape_counts_frozen():
    rep = shape_separation_check(2, 2, 3)
    # n = 6, q = 4: first part in {4, 5, 6} gives 3 + 2 + 1 compositions
    assert (rep.shape_a, rep.shape_b) == (6, 6)


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_build_L_preserves_dimension(p):
    F = FieldSpec(p)
    for L_Z in (torus_toy(F), mixed_toy(F)):
        td = build_L(L_Z, (0, 0, 0, 1), F)
        assert len(td.L) == len(L_Z)
        assert td.n == 2 + td.q
        for ell, ellz in zip(td.L, L_Z):
            assert ell == ellz * pure_symbol(F, [0, 0, 0, 1], td.q)


def test_build_L_flag():
    assert not build_L(torus_toy(GF(3)), (0, 0, 0, 1), GF(3)).m_not_minus_one
    assert build_L(torus_toy(GF(2)), (0, 0, 0, 1), GF(2)).m_not_minus_one
    assert build_L(torus_toy(QQ), (0, 0, 0, 1), QQ).m_not_minus_one


def test_build_L_errors():
    F = QQ
    with pytest.raises(ValueError):
        build_L([], (1, 0), F)
    with pytest.raises(ValueError):
        build_L(torus_toy(F), (0, 0, 0, 0), F)
    with pytest.raises(ValueError):
        build_L(torus_toy(F) + [basis_symbol(F, (2, 0, 0, 0))], (0, 0, 0, 1), F)
    with pytest.raises(ValueError):
        build_L(torus_toy(F), (0, 0, 1), F)


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_lie_stabilizer_survives_shift(p):
    F = FieldSpec(p)
    for L_Z in (torus_toy(F), mixed_toy(F)):
        td = build_L(L_Z, (0, 0, 0, 1), F)
        before = lie_stab_subspace(L_Z)
        after = lie_stab_subspace(list(td.L))
        assert before.dimension == after.dimension


def test_lie_stabilizer_values_frozen():
    assert lie_stab_subspace(torus_toy(QQ)).dimension == 4
    assert lie_stab_subspace(mixed_toy(QQ)).dimension == 4
    assert lie_stab_subspace(mixed_toy(GF(2))).dimension == 7


@pytest.mark.parametrize("w0,dim", [((1, 0, 0, 1), 3), ((1, 1, 1, 1), 1)])
def test_unfixed_w0_shrinks_stabilizer(w0, dim):
    # when w0 is not fixed by the torus, only part of it survives
    F = QQ
    td = build_L(torus_toy(F), w0, F)
    assert lie_stab_subspace(list(td.L)).dimension == dim


def test_tannaka_json():
    td = build_L(torus_toy(GF(2)), (0, 0, 0, 1), GF(2))
    js = td.to_json()
    assert (js["m"], js["q"], js["n"]) == (2, 4, 6)
    assert len(js["L"]) == 4 and js["L"][0]["degree"] == 6


# ---------------------------------------------------------------------------
# fixed point and diagonal embedding
# ---------------------------------------------------------------------------


def test_fixed_point_w0():
    fp = fixed_point_w0(2, 2, 30, GF(2))
    assert fp.symbol.coeffs == {(0, 2, 0, 28): 1}
    # with F-disjoint exponents the repeated factor collapses without a multinomial
    assert fp.symbol == tau_eval(GF(2), [fp.first] + [fp.second] * 3, [2, 4, 8, 16])
    with pytest.raises(ValueError):
        fixed_point_w0(2, 30, 30, GF(2))
    with pytest.raises(ValueError):
        fixed_point_w0(0, 1, 3, GF(2))


def test_diagonal_helpers():
    assert diagonal_block_size(0) == 2
    assert diagonal_block_size(3) == 3
    assert all(2 * diagonal_block_size(g) - 1 > g for g in range(20))
    g = FieldMatrix(GF(3), [[1, 2], [0, 1]])
    D = diagonal_embed(g)
    assert D.shape == (4, 4)
    assert D[0, 1] == 2 and D[2, 3] == 2 and D[0, 3] == 0
    h = FieldMatrix(GF(3), [[2, 0], [1, 1]])
    assert diagonal_embed(g @ h) == diagonal_embed(g) @ diagonal_embed(h)
