"""Contiguity maps between neighboring parameter vectors.

The map multiplying by the i-th linear form factors through intersection
matrices and one diagonal matrix of minor ratios:

    c_i(alpha; x) = C(alpha + delta_i)
                    . P_i(alpha + delta_i)^(-1)
                    . D_i(x)
                    . Q_i(alpha)
                    . C(alpha)^(-1)

The two inverses inside the product use the closed forms from the
intersection module; the inverse of c_i itself (needed for downward shifts)
is obtained by building c_i at the shifted parameters and solving with exact
elimination, never by symbolically inverting the five-factor product.

Series-level shifts carry scalar factors: none for the row indices
1 <= i <= k, and 1/(alpha_i + 1) (upward) or alpha_i (downward) for the
column-block indices k+1 <= i <= k+n+1.
"""

from __future__ import annotations

from functools import lru_cache

from . import linalg
from .errors import PathStepError, SingularMinorError
from .gauss_manin import GMVector, v_J
from .indexsets import (
    IndexSet,
    aligned_0Ji,
    aligned_iJ0,
    enumerate_J_dot,
    enumerate_pJq,
)
from .intersection import (
    SquareMatrixR,
    inverse_C,
    inverse_P,
    matrix_C,
    matrix_Q,
    pairing_scaled,
)
from .minors import minor
from .rationals import rat


def _diag_of(x, i):
    """Diagonal entries of the minor-ratio matrix: tuple-order minor of the
    upper label over the tuple-order minor of the lower one (sorting signs
    folded in)."""
    shape = x.shape
    up = aligned_0Ji(i, shape)
    lo = aligned_iJ0(i, shape)
    out = []
    for (su, gu), (sl, gl) in zip(up, lo):
        num = minor(x, su)
        den = minor(x, sl)
        if num == 0 or den == 0:
            raise SingularMinorError(f"vanishing minor in diagonal ratio {su}/{sl}")
        out.append((num if gu > 0 else -num) / (den if gl > 0 else -den))
    return out


def D_matrix(x, i):
    """Diagonal matrix of minor ratios for the i-th multiplication map.

    Row labels are the aligned_0Ji sets, column labels the aligned_iJ0 sets.
    """
    shape = x.shape
    up = aligned_0Ji(i, shape)
    lo = aligned_iJ0(i, shape)
    r = shape.rank
    zero = rat(0)
    diag = _diag_of(x, i)
    rows = tuple(
        tuple(diag[a] if a == b else zero for b in range(r)) for a in range(r)
    )
    return SquareMatrixR(tuple(s for s, _ in up), tuple(s for s, _ in lo), rows)


@lru_cache(maxsize=2048)
def _left_factor(alpha_shifted, i):
    """x-independent left half C(alpha+delta_i) . P_i(alpha+delta_i)^(-1)."""
    return matrix_C(alpha_shifted) @ inverse_P(alpha_shifted, i)


@lru_cache(maxsize=2048)
def _right_factor(alpha, i):
    """x-independent right half Q_i(alpha) . C(alpha)^(-1)."""
    return matrix_Q(alpha, i) @ inverse_C(alpha)


def contiguity_matrix(alpha, x, i):
    """The matrix of the i-th contiguity map on the J_dot basis; invertible
    whenever all entries of alpha and alpha+delta_i are nonzero and x is
    generic."""
    alpha.require_nonzero()
    shifted = alpha.shift_up(i)
    shifted.require_nonzero()
    left = _left_factor(shifted, i)
    right = _right_factor(alpha, i)
    diag = _diag_of(x, i)
    scaled_right = SquareMatrixR(
        left.col_labels,
        right.col_labels,
        tuple(tuple(d * v for v in row) for d, row in zip(diag, right.rows)),
    )
    return left @ scaled_right


def apply_contiguity(alpha, x, i, vec):
    """c_i(alpha; x) applied to a J_dot-labeled vector without forming the
    full product (three matrix-vector passes and one diagonal scaling)."""
    alpha.require_nonzero()
    shifted = alpha.shift_up(i)
    shifted.require_nonzero()
    w = _right_factor(alpha, i).apply(vec)
    diag = _diag_of(x, i)
    w = GMVector(_left_factor(shifted, i).col_labels, tuple(d * v for d, v in zip(diag, w.entries)))
    return _left_factor(shifted, i).apply(w)


def shift_up_series(alpha, x, i, sbar):
    """Transport the series vector from alpha to alpha + delta_i."""
    shape = alpha.shape
    if i > shape.k:
        if alpha[i] == -1:
            raise PathStepError(f"scalar pole: alpha_{i} = -1 on an upward shift")
        out = apply_contiguity(alpha, x, i, sbar)
        return out.scaled(rat(1) / (alpha[i] + 1))
    return apply_contiguity(alpha, x, i, sbar)


def shift_down_series(alpha, x, i, sbar):
    """Transport the series vector from alpha to alpha - delta_i: build the
    contiguity matrix at the target parameters and solve by exact elimination."""
    target = alpha.shift_down(i)
    c = contiguity_matrix(target, x, i)
    w = linalg.solve([list(r) for r in c.rows], list(sbar.entries))
    out = GMVector(c.col_labels, tuple(w))
    if i > alpha.shape.k:
        return out.scaled(alpha[i])
    return out


def contiguity_inverse_frame_free(alpha, x, i, phi):
    """Frame-free inverse action on a J_dot-coordinate column (the transported
    vector convention): for each label J containing i (not 0), weight

        <v_J at shifted parameters, phi> / I(swap, J) . |xtilde<swap>|/|xtilde<J>|

    (swap = J with i replaced by 0) and emit that multiple of the pairing
    column of J.  Per-label this is a rank-one summand of the inverse matrix,
    so the total equals solving contiguity_matrix(alpha, x, i) against phi.
    """
    shape = alpha.shape
    alpha.require_nonzero()
    shifted = alpha.shift_up(i)
    shifted.require_nonzero()
    jdot = enumerate_J_dot(shape)
    out = GMVector.zero(jdot)
    for J in enumerate_pJq(i, 0, shape):
        swap = IndexSet(tuple(sorted(tuple(e for e in J.elements if e != i) + (0,))))
        num = sum(
            v * s for v, s in zip(v_J(shifted, J).entries, phi.entries) if v and s
        )
        if num == 0:
            continue
        den = pairing_scaled(alpha, swap, J)
        m_swap = minor(x, swap)
        m_J = minor(x, J)
        if m_J == 0:
            raise SingularMinorError(f"minor {J} vanishes at the given x")
        coeff = num / den * m_swap / m_J
        pair_col = GMVector(jdot, tuple(pairing_scaled(alpha, Jp, J) for Jp in jdot))
        out = out + pair_col.scaled(coeff)
    return out
