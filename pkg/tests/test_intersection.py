import pytest

from tablehgm import IndexSet, ParamVector, Shape
from tablehgm.errors import InputError, InternalCheckError, ZeroAlphaError
from tablehgm.indexsets import enumerate_J, enumerate_J_dot
from tablehgm.intersection import (
    inverse_C,
    inverse_Cpq,
    inverse_P,
    matrix_C,
    matrix_Cpq,
    matrix_P,
    matrix_Q,
    pairing_scaled,
)
from tablehgm.linalg import det
from tablehgm.rationals import rat

from conftest import random_alpha_nonzero, small_shapes

A22 = ParamVector(Shape(2, 2), (-3, -2, -3, 3, 4, 1))
A11 = ParamVector(Shape(1, 1), (-2, -1, 1, 2))


def test_param_vector_invariants():
    with pytest.raises(InputError):
        ParamVector(Shape(1, 1), (1, 1, 1, 1))
    with pytest.raises(InputError):
        ParamVector(Shape(1, 1), (1, -1, 0))
    a = A11.shift_up(3)
    assert a.entries == (-3, -1, 1, 3)
    assert a.shift_down(3) == A11
    assert A11.negated().entries == (2, 1, -1, -2)
    with pytest.raises(ZeroAlphaError):
        ParamVector(Shape(1, 1), (0, -1, 1, 0)).require_nonzero()


def test_pairing_diagonal_example():
    J = IndexSet((0, 1, 2))
    assert pairing_scaled(A22, J, J) == rat(-8) / (-18)
    assert pairing_scaled(A22, J, J) == rat(4, 9)


def test_pairing_disjoint_is_zero():
    assert pairing_scaled(A22, IndexSet((0, 1, 2)), IndexSet((3, 4, 5))) == 0
    assert pairing_scaled(A22, IndexSet((0, 1, 3)), IndexSet((0, 2, 4))) == 0


def test_pairing_adjacent_case():
    # J = {p, j1..jk}, Jp = {j1..jk, q} with p below and q above the shared block
    shape = Shape(2, 2)
    alpha = ParamVector(shape, (-3, -2, -3, 3, 4, 1))
    J = IndexSet((0, 1, 2))
    Jp = IndexSet((1, 2, 5))
    want = rat((-1) ** 2) / (alpha[1] * alpha[2])
    assert pairing_scaled(alpha, J, Jp) == want


def test_pairing_symmetry(rng):
    for shape in small_shapes(4):
        alpha = random_alpha_nonzero(rng, shape)
        labels = enumerate_J(shape)
        for _ in range(30):
            J = rng.choice(labels)
            Jp = rng.choice(labels)
            assert pairing_scaled(alpha, J, Jp) == pairing_scaled(alpha, Jp, J)


def test_pairing_dual_sign(rng):
    for shape in small_shapes(4):
        alpha = random_alpha_nonzero(rng, shape)
        neg = alpha.negated()
        sign = (-1) ** shape.k
        labels = enumerate_J(shape)
        for _ in range(20):
            J = rng.choice(labels)
            Jp = rng.choice(labels)
            assert pairing_scaled(neg, J, Jp) == sign * pairing_scaled(alpha, J, Jp)


def test_pairing_zero_alpha_raises():
    alpha = ParamVector(Shape(1, 1), (0, -1, 1, 0))
    with pytest.raises(ZeroAlphaError):
        pairing_scaled(alpha, IndexSet((0, 1)), IndexSet((0, 1)))


def test_matrix_C_small_entries():
    c = matrix_C(A11)
    jd = enumerate_J_dot(Shape(1, 1))
    assert c.row_labels == jd and c.col_labels == jd
    assert c.rows[0][0] == rat(-3, 2)
    assert c.rows[1][1] == rat(1, 2)
    assert c.rows[0][1] == rat(-1, 2)
    assert c.rows[1][0] == rat(-1, 2)


def test_matrix_Cpq_specializations():
    s = Shape(2, 2)
    assert matrix_Cpq(A22, 0, 5, 0, 5) == matrix_C(A22)
    p = matrix_P(A22, 3)
    for J in p.row_labels:
        assert 3 in J and 0 not in J
    q = matrix_Q(A22, 3)
    for J in q.row_labels:
        assert 0 in J and 3 not in J


def test_matrix_Q_small_entries():
    q = matrix_Q(A11, 1)
    assert [J.elements for J in q.row_labels] == [(0, 3), (0, 2)]
    # entries from the pairing with {01}, {02}
    assert q.rows[0][0] == rat(-1, 2)  # I({03},{01}) = 1/alpha_0
    assert q.rows[0][1] == rat(-1, 2)
    assert q.rows[1][0] == rat(-1, 2)
    assert q.rows[1][1] == rat(1, 2)


def test_Cpq_swap_matched_is_diagonal(rng):
    for shape in small_shapes(4):
        alpha = random_alpha_nonzero(rng, shape)
        cand = list(range(shape.ncols))
        p, q = rng.sample(cand, 2)
        m = matrix_Cpq(alpha, p, q, q, p)
        for a in range(m.size):
            for b in range(m.size):
                if a != b:
                    assert m.rows[a][b] == 0
                else:
                    assert m.rows[a][b] != 0


def test_transpose_relation(rng):
    for shape in small_shapes(4)[:3]:
        alpha = random_alpha_nonzero(rng, shape)
        cand = list(range(shape.ncols))
        p1, q1 = rng.sample(cand, 2)
        p2, q2 = rng.sample(cand, 2)
        m = matrix_Cpq(alpha, p1, q1, p2, q2)
        mt = matrix_Cpq(alpha, p2, q2, p1, q1)
        assert m.transpose() == mt


def test_inverse_Cpq_matches_elimination(rng):
    for shape in small_shapes(5):
        alpha = random_alpha_nonzero(rng, shape)
        cand = list(range(shape.ncols))
        p1, q1 = rng.sample(cand, 2)
        p2, q2 = rng.sample(cand, 2)
        m = matrix_Cpq(alpha, p1, q1, p2, q2)
        closed = inverse_Cpq(alpha, p1, q1, p2, q2)
        assert closed == m.inverse()
        assert (m @ closed).is_identity()
        assert (closed @ m).is_identity()


def test_inverse_Cpq_diagonal_case():
    alpha = A22
    m = matrix_Cpq(alpha, 1, 4, 4, 1)
    inv = inverse_Cpq(alpha, 1, 4, 4, 1)
    for a in range(m.size):
        assert inv.rows[a][a] == 1 / m.rows[a][a]


def test_inverse_Cpq_2x2_adjugate():
    m = matrix_C(A11)
    inv = inverse_C(A11)
    d = det([list(r) for r in m.rows])
    adj = [[m.rows[1][1] / d, -m.rows[0][1] / d], [-m.rows[1][0] / d, m.rows[0][0] / d]]
    assert [list(r) for r in inv.rows] == adj


def test_matrix_C_invertible_many_alphas(rng):
    trials_per_shape = 10
    shapes = small_shapes(5)
    for shape in shapes:
        for _ in range(trials_per_shape):
            alpha = random_alpha_nonzero(rng, shape)
            d = det([list(r) for r in matrix_C(alpha).rows])
            assert d != 0


def test_inverse_P_matches_elimination(rng):
    for shape in small_shapes(4):
        alpha = random_alpha_nonzero(rng, shape)
        for i in range(1, shape.last + 1):
            p = matrix_P(alpha, i)
            closed = inverse_P(alpha, i)
            assert closed == p.inverse()
            assert (closed @ p).is_identity()


def test_matmul_label_discipline():
    c = matrix_C(A11)
    q = matrix_Q(A11, 1)
    with pytest.raises(InternalCheckError):
        _ = c @ q  # c columns are J_dot, q rows are the aligned labels
