"""The extended matrix and its minors.

x is a k x n matrix of exact rationals.  The extended matrix has k+1 rows
and k+n+2 columns:

    column 0           (1, 0, ..., 0)
    columns 1..k       identity block below a zero top entry
    columns k+1..k+n   (1, x_{1j}, ..., x_{kj})
    column k+n+1       all ones

minor(x, J) is the determinant of the columns selected by J in ascending
order.  Since x_{ij} occurs exactly once in the extended matrix (row i of
column k+j), every derivative of a minor is a single row-replacement
determinant.  Minor values are memoized per (x, J); the connection assembly
reuses them heavily.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, SingularMinorError
from .indexsets import Shape, enumerate_J, sort_with_sign
from .linalg import det
from .rationals import rat


@dataclass(frozen=True)
class XMatrix:
    """k x n matrix of exact rational variables, 1-based accessors."""

    shape: Shape
    entries: tuple  # k row tuples of n rationals

    def __post_init__(self):
        if len(self.entries) != self.shape.k or any(
            len(row) != self.shape.n for row in self.entries
        ):
            raise InputError("entry grid does not match shape")

    @classmethod
    def from_rows(cls, rows):
        rows = tuple(tuple(rat(v) if isinstance(v, int) else v for v in row) for row in rows)
        return cls(Shape(len(rows), len(rows[0])), rows)

    def entry(self, i, j):
        """x_{ij} with 1 <= i <= k, 1 <= j <= n."""
        return self.entries[i - 1][j - 1]


@lru_cache(maxsize=None)
def build_xtilde(x):
    """Rows of the extended (k+1) x (k+n+2) matrix."""
    k, n = x.shape.k, x.shape.n
    one, zero = rat(1), rat(0)
    rows = [(one,) + (zero,) * k + (one,) * n + (one,)]
    for i in range(1, k + 1):
        rows.append(
            (zero,)
            + tuple(one if c == i else zero for c in range(1, k + 1))
            + x.entries[i - 1]
            + (one,)
        )
    return tuple(rows)


@lru_cache(maxsize=None)
def minor(x, J):
    """|xtilde<J>|: determinant of the selected columns in ascending order."""
    xt = build_xtilde(x)
    cols = J.elements
    return det([[row[c] for c in cols] for row in xt])


def minor_tuple(x, tup):
    """Minor with columns in tuple order: sorting sign times the sorted minor."""
    s, sign = sort_with_sign(tup)
    value = minor(x, s)
    return value if sign > 0 else -value


def d_minor(x, J, i, j):
    """d|xtilde<J>| / dx_{ij}; zero when column k+j is not selected.

    The variable sits at (row i, column k+j), so the derivative is the
    determinant with row i replaced by the unit row at that column position.
    """
    k = x.shape.k
    col = k + j
    if col not in J:
        return rat(0)
    c = J.position(col)
    xt = build_xtilde(x)
    sub = [[row[cc] for cc in J.elements] for row in xt]
    one, zero = rat(1), rat(0)
    sub[i] = [one if p == c else zero for p in range(len(sub))]
    return det(sub)


def dlog_minor(x, J, i, j):
    """d log|xtilde<J>| / dx_{ij}; requires the minor to be nonzero."""
    m = minor(x, J)
    if m == 0:
        raise SingularMinorError(f"minor {J} vanishes at the given x")
    return d_minor(x, J, i, j) / m


def d2_minor(x, J, ij1, ij2):
    """Second derivative of |xtilde<J>| in two variable positions.

    The determinant is affine in every entry, so the value is zero whenever
    the two positions share a row or a column; otherwise it is the double
    row-replacement determinant.
    """
    k = x.shape.k
    (i1, j1), (i2, j2) = ij1, ij2
    c1, c2 = k + j1, k + j2
    if c1 not in J or c2 not in J:
        return rat(0)
    if i1 == i2 or j1 == j2:
        return rat(0)
    p1, p2 = J.position(c1), J.position(c2)
    xt = build_xtilde(x)
    sub = [[row[cc] for cc in J.elements] for row in xt]
    one, zero = rat(1), rat(0)
    sub[i1] = [one if p == p1 else zero for p in range(len(sub))]
    sub[i2] = [one if p == p2 else zero for p in range(len(sub))]
    return det(sub)


def d2log_minor(x, J, ij1, ij2):
    """Second derivative of log|xtilde<J>| by the quotient rule, exactly."""
    m = minor(x, J)
    if m == 0:
        raise SingularMinorError(f"minor {J} vanishes at the given x")
    return d2_minor(x, J, ij1, ij2) / m - (
        d_minor(x, J, *ij1) * d_minor(x, J, *ij2)
    ) / (m * m)


def check_in_X(x):
    """All labels with vanishing minor; empty exactly when x is generic."""
    return [J for J in enumerate_J(x.shape) if minor(x, J) == 0]
