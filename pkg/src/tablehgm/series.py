"""Ground-truth oracles: the finite series, its derivatives, and brute-force
table enumeration.

In the statistical regime (alpha_1..alpha_k negative integers,
alpha_{k+1}..alpha_{k+n} positive integers) the series

    S(alpha; x) = sum over nonnegative integer k x n matrices m of
                  x^m / G_m(alpha)

is a polynomial: the weight 1/G_m vanishes unless every row sum of m is at
most -alpha_i, every column sum at most alpha_{k+j}, and the running total
clears the offset sum(alpha_1..alpha_k) + alpha_{k+n+1}.  Everything here is
exact and deliberately naive; these functions are the reference the fast
pipeline is judged against.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

from .errors import InputError, PreconditionError, RegimeError
from .gauss_manin import GMVector
from .indexsets import enumerate_J_dot
from .minors import d_minor, minor
from .rationals import rat


def require_statistical(alpha):
    """The finite-support regime: integer entries, negative row block,
    positive column block."""
    for a in alpha:
        if not isinstance(a, int):
            raise RegimeError(f"entries must be integers, got {a!r}")
    k, n = alpha.shape.k, alpha.shape.n
    bad_rows = [i for i in range(1, k + 1) if alpha[i] >= 0]
    bad_cols = [k + j for j in range(1, n + 1) if alpha[k + j] <= 0]
    if bad_rows or bad_cols:
        raise RegimeError(
            f"outside the finite-support regime: nonnegative row slots {bad_rows}, "
            f"nonpositive column slots {bad_cols} in {alpha.entries}"
        )


def _inv_gamma(v):
    """1/Gamma at an integer: zero at nonpositive arguments, else 1/(v-1)!."""
    return rat(0) if v <= 0 else rat(1, factorial(v - 1))


def gamma_reciprocal(alpha, m):
    """1/G_m(alpha) for a k x n nonnegative integer matrix m (row tuples)."""
    k, n = alpha.shape.k, alpha.shape.n
    out = rat(1)
    total = 0
    for i in range(1, k + 1):
        row_sum = sum(m[i - 1])
        total += row_sum
        out *= _inv_gamma(-alpha[i] - row_sum + 1)
        if out == 0:
            return out
    for j in range(1, n + 1):
        col_sum = sum(m[i][j - 1] for i in range(k))
        out *= _inv_gamma(alpha[k + j] - col_sum + 1)
        if out == 0:
            return out
    offset = sum(alpha[i] for i in range(1, k + 1)) + alpha[k + n + 1]
    out *= _inv_gamma(offset + total + 1)
    if out == 0:
        return out
    for row in m:
        for v in row:
            out *= _inv_gamma(v + 1)
    return out


class SeriesPolynomial:
    """Sparse polynomial over the variable grid: {m-matrix: coefficient}."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms):
        self.shape = shape
        self.terms = terms

    def eval(self, x):
        out = rat(0)
        for m, c in self.terms.items():
            term = c
            for i in range(self.shape.k):
                row = m[i]
                xr = x.entries[i]
                for j in range(self.shape.n):
                    e = row[j]
                    if e:
                        term *= xr[j] ** e
            out += term
        return out

    def partial(self, i, j):
        """d/dx_{ij}, 1-based indices."""
        out = {}
        for m, c in self.terms.items():
            e = m[i - 1][j - 1]
            if e == 0:
                continue
            row = list(m[i - 1])
            row[j - 1] = e - 1
            key = m[: i - 1] + (tuple(row),) + m[i:]
            out[key] = out.get(key, rat(0)) + c * e
        return SeriesPolynomial(self.shape, out)

    def total_degree(self):
        return max((sum(sum(row) for row in m) for m in self.terms), default=0)


@lru_cache(maxsize=512)
def series_polynomial(alpha):
    """The polynomial S(alpha; .) in the statistical regime."""
    require_statistical(alpha)
    shape = alpha.shape
    k, n = shape.k, shape.n
    row_caps = [-alpha[i] for i in range(1, k + 1)]
    col_caps = [alpha[k + j] for j in range(1, n + 1)]
    cells = [(i, j) for i in range(k) for j in range(n)]
    terms = {}
    grid = [[0] * n for _ in range(k)]

    def rec(idx, row_rem, col_rem):
        if idx == len(cells):
            m = tuple(tuple(row) for row in grid)
            c = gamma_reciprocal(alpha, m)
            if c != 0:
                terms[m] = c
            return
        i, j = cells[idx]
        top = min(row_rem[i], col_rem[j])
        for v in range(top + 1):
            grid[i][j] = v
            row_rem[i] -= v
            col_rem[j] -= v
            rec(idx + 1, row_rem, col_rem)
            row_rem[i] += v
            col_rem[j] += v
        grid[i][j] = 0

    rec(0, row_caps, col_caps)
    return SeriesPolynomial(shape, terms)


def series_S(alpha, x):
    """Exact value of the polynomial series at x."""
    return series_polynomial(alpha).eval(x)


def series_partial(alpha, x, pairs):
    """Mixed partial over distinct variable positions, evaluated at x."""
    shape = alpha.shape
    seen = set()
    for i, j in pairs:
        if not (1 <= i <= shape.k and 1 <= j <= shape.n):
            raise InputError(f"variable position out of range: ({i},{j})")
        if (i, j) in seen:
            raise InputError(f"repeated variable position ({i},{j})")
        seen.add((i, j))
    poly = series_polynomial(alpha)
    for i, j in pairs:
        poly = poly.partial(i, j)
    return poly.eval(x)


def _gm_entry_plan(shape, J):
    """Rows removed from the base label paired, ascending with ascending, to
    the column indices added; plus the scalar denominator slots."""
    added = [c for c in J.elements if c > shape.k]
    removed = sorted(set(range(1, shape.k + 1)) - set(J.elements))
    pairs = [(i, c - shape.k) for i, c in zip(removed, added)]
    return pairs, added


def gm_vector_S(alpha, x):
    """The transported-series vector at alpha: for each basis label, the
    sorted minor over the product of column-block parameters, times the
    matching mixed partial of the series."""
    shape = alpha.shape
    poly = series_polynomial(alpha)
    labels = enumerate_J_dot(shape)
    entries = []
    for J in labels:
        pairs, added = _gm_entry_plan(shape, J)
        p = poly
        for i, j in pairs:
            p = p.partial(i, j)
        den = 1
        for c in added:
            den *= alpha[c]
        entries.append(minor(x, J) / den * p.eval(x))
    return GMVector(labels, tuple(entries))


def gm_vector_S_partial(alpha, x, di, dj):
    """Exact d/dx_{di,dj} of gm_vector_S, entry by entry (product rule on the
    minor factor and one more partial on the series factor).  This is the
    independent oracle for the connection matrices."""
    shape = alpha.shape
    poly = series_polynomial(alpha)
    labels = enumerate_J_dot(shape)
    entries = []
    for J in labels:
        pairs, added = _gm_entry_plan(shape, J)
        p = poly
        for i, j in pairs:
            p = p.partial(i, j)
        den = 1
        for c in added:
            den *= alpha[c]
        val = d_minor(x, J, di, dj) / den * p.eval(x)
        val += minor(x, J) / den * p.partial(di, dj).eval(x)
        entries.append(val)
    return GMVector(labels, tuple(entries))


def enumerate_tables(row_sums, col_sums):
    """Every nonnegative integer matrix with the given margins, exactly once
    (row-major recursion with remaining-capacity pruning)."""
    if sum(row_sums) != sum(col_sums):
        raise InputError(
            f"marginal totals differ: {sum(row_sums)} vs {sum(col_sums)}"
        )
    r1, r2 = len(row_sums), len(col_sums)

    def rows(i, col_rem, acc):
        if i == r1:
            if all(c == 0 for c in col_rem):
                yield tuple(acc)
            return
        def fill(j, rem, row):
            if j == r2 - 1:
                if 0 <= rem <= col_rem[j]:
                    acc.append(tuple(row) + (rem,))
                    new_rem = list(col_rem)
                    for jj, v in enumerate(acc[-1]):
                        new_rem[jj] -= v
                    yield from rows(i + 1, new_rem, acc)
                    acc.pop()
                return
            for v in range(min(rem, col_rem[j]) + 1):
                row.append(v)
                yield from fill(j + 1, rem - v, row)
                row.pop()
        yield from fill(0, row_sums[i], [])

    yield from rows(0, list(col_sums), [])


def count_tables(row_sums, col_sums):
    """Number of tables with the given margins, by dynamic programming over
    remaining column sums (independent of enumerate_tables)."""
    if sum(row_sums) != sum(col_sums):
        raise InputError("marginal totals differ")
    states = {tuple(col_sums): 1}
    for s in row_sums:
        new = {}
        for rem, cnt in states.items():
            for comp in _compositions(s, rem):
                key = tuple(r - c for r, c in zip(rem, comp))
                new[key] = new.get(key, 0) + cnt
        states = new
    return states.get(tuple([0] * len(col_sums)), 0)


def _compositions(total, caps):
    """All ways to write total as capped nonnegative parts."""
    if len(caps) == 1:
        if 0 <= total <= caps[0]:
            yield (total,)
        return
    for v in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - v, caps[1:]):
            yield (v,) + rest


def oracle_Z(row_sums, col_sums, p):
    """Brute-force normalizing constant: sum of p^u / u! over all tables."""
    z = rat(0)
    for u in enumerate_tables(row_sums, col_sums):
        term = rat(1)
        for i, row in enumerate(u):
            for j, v in enumerate(row):
                term *= p[i][j] ** v
                term /= factorial(v)
        z += term
    return z


def oracle_E(row_sums, col_sums, p):
    """Brute-force expectation matrix of the table distribution."""
    r1, r2 = len(row_sums), len(col_sums)
    z = rat(0)
    acc = [[rat(0)] * r2 for _ in range(r1)]
    for u in enumerate_tables(row_sums, col_sums):
        term = rat(1)
        for i, row in enumerate(u):
            for j, v in enumerate(row):
                term *= p[i][j] ** v
                term /= factorial(v)
        z += term
        for i in range(r1):
            for j in range(r2):
                if u[i][j]:
                    acc[i][j] += u[i][j] * term
    if z == 0:
        raise PreconditionError("no tables exist for the given margins")
    return tuple(tuple(v / z for v in row) for row in acc)
