import pytest

from tablehgm import IndexSet, IndexTuple, Shape, XMatrix
from tablehgm.errors import SingularMinorError
from tablehgm.indexsets import enumerate_J, in_J_circ
from tablehgm.linalg import det
from tablehgm.minors import (
    build_xtilde,
    check_in_X,
    d2log_minor,
    d_minor,
    dlog_minor,
    minor,
    minor_tuple,
)
from tablehgm.rationals import rat

from conftest import random_x


PAPER_X = XMatrix.from_rows([[rat(1, 2), rat(1, 3)], [rat(1, 5), rat(1, 7)]])


def test_build_xtilde_small():
    x = XMatrix.from_rows([[rat(7, 3)]])
    xt = build_xtilde(x)
    assert xt == ((rat(1), rat(0), rat(1), rat(1)), (rat(0), rat(1), rat(7, 3), rat(1)))


def test_xtilde_top_row_and_width():
    xt = build_xtilde(PAPER_X)
    assert xt[0] == (rat(1), rat(0), rat(0), rat(1), rat(1), rat(1))
    assert all(len(row) == 6 for row in xt)


def test_minor_examples():
    assert minor(PAPER_X, IndexSet((0, 1, 2))) == 1
    det22 = rat(1, 2) * rat(1, 7) - rat(1, 3) * rat(1, 5)
    assert minor(PAPER_X, IndexSet((0, 3, 4))) == det22
    assert minor(PAPER_X, IndexSet((0, 2, 3))) == -rat(1, 2)


def test_minor_tuple_examples():
    assert minor_tuple(PAPER_X, (0, 3, 2)) == rat(1, 2)
    assert minor_tuple(PAPER_X, (0, 2, 3)) == minor(PAPER_X, IndexSet((0, 2, 3)))
    assert minor_tuple(PAPER_X, IndexTuple((3, 0, 4))) == -minor_tuple(PAPER_X, (0, 3, 4))


def test_dlog_minor_examples():
    # column not selected: no dependence
    assert dlog_minor(PAPER_X, IndexSet((0, 1, 2)), 1, 1) == 0
    # |xtilde<013>| = x21
    assert dlog_minor(PAPER_X, IndexSet((0, 1, 3)), 2, 1) == rat(5)
    det22 = minor(PAPER_X, IndexSet((0, 3, 4)))
    assert dlog_minor(PAPER_X, IndexSet((0, 3, 4)), 1, 1) == rat(1, 7) / det22


def test_dlog_two_expansion_routes(rng):
    """Row-replacement and column-replacement give the same cofactor."""
    shape = Shape(2, 2)
    x = random_x(rng, shape)
    xt = build_xtilde(x)
    for J in enumerate_J(shape):
        for i in range(1, 3):
            for j in range(1, 3):
                col = 2 + j
                via_row = d_minor(x, J, i, j)
                if col not in J:
                    assert via_row == 0
                    continue
                c = J.position(col)
                sub = [list(row[cc] for cc in J.elements) for row in xt]
                for r in range(len(sub)):
                    sub[r][c] = rat(1) if r == i else rat(0)
                assert via_row == det(sub)


def test_dlog_zero_outside_J_circ(rng):
    shape = Shape(2, 2)
    x = random_x(rng, shape)
    for J in enumerate_J(shape):
        if in_J_circ(J, shape):
            continue
        if minor(x, J) == 0:
            continue
        for i in range(1, 3):
            for j in range(1, 3):
                assert dlog_minor(x, J, i, j) == 0


def test_J_circ_detects_variable_dependence(rng):
    """Members of J_circ have a nonzero minor gradient at generic points;
    non-members have identically zero gradient (checked at 3 random points)."""
    shape = Shape(2, 2)
    xs = [random_x(rng, shape) for _ in range(3)]
    for J in enumerate_J(shape):
        grads = [
            d_minor(x, J, i, j)
            for x in xs
            for i in range(1, 3)
            for j in range(1, 3)
        ]
        if in_J_circ(J, shape):
            assert any(g != 0 for g in grads)
        else:
            assert all(g == 0 for g in grads)


def test_dlog_raises_on_vanishing_minor():
    x = XMatrix.from_rows([[rat(1)]])  # |xtilde<23>| = 1 - x11 = 0
    with pytest.raises(SingularMinorError):
        dlog_minor(x, IndexSet((2, 3)), 1, 1)


def test_minor_antisymmetry(rng):
    shape = Shape(2, 3)
    x = random_x(rng, shape)
    J = IndexSet((0, 3, 4))
    assert minor_tuple(x, (3, 0, 4)) == -minor(x, J)
    assert minor_tuple(x, (4, 3, 0)) == -minor(x, J)
    assert minor_tuple(x, (3, 4, 0)) == minor(x, J)


def test_check_in_X():
    assert check_in_X(PAPER_X) == []
    # equal interior columns kill a minor
    bad = XMatrix.from_rows([[rat(1, 2), rat(1, 2)], [rat(1, 5), rat(1, 5)]])
    assert check_in_X(bad)
    # x11 = 1 collides with the all-ones column: |xtilde<23>| = 1 - x11 = 0
    unit = XMatrix.from_rows([[rat(1)]])
    assert IndexSet((2, 3)) in check_in_X(unit)


def test_d2log_small_closed_form():
    # |xtilde<23>| = 1 - x11 for k = n = 1
    x = XMatrix.from_rows([[rat(1, 3)]])
    J = IndexSet((2, 3))
    val = d2log_minor(x, J, (1, 1), (1, 1))
    m = rat(1) - rat(1, 3)
    assert val == -rat(1) / (m * m)
