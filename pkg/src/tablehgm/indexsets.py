"""Index-set combinatorics for the cohomology basis labels.

The ambient column indices are {0, 1, ..., k+n+1}.  Basis labels are the
(k+1)-subsets J; the standard ordered basis J_dot collects the J containing
0 and omitting k+n+1, aligned lexicographically.  Several derived alignments
(aligned_iJ0, aligned_0Ji) replace an index inside the defining tuple in
place, which can break the ascending order: those functions therefore return
the sorted label together with the sign of the sorting permutation, and that
sign must be folded into any matrix row or column the label indexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb

from .errors import InputError, InternalCheckError


@dataclass(frozen=True)
class Shape:
    """Size parameters: k x n variable matrix, k+n+2 ambient columns."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise InputError(f"need k >= 1 and n >= 1, got k={self.k}, n={self.n}")

    @cached_property
    def rank(self):
        """Cohomology rank r = C(k+n, k)."""
        return comb(self.k + self.n, self.k)

    @property
    def ncols(self):
        return self.k + self.n + 2

    @property
    def last(self):
        """Largest column index k+n+1."""
        return self.k + self.n + 1


@dataclass(frozen=True)
class IndexSet:
    """Strictly ascending tuple of distinct column indices (a sorted label J)."""

    elements: tuple

    def __post_init__(self):
        e = self.elements
        if any(a >= b for a, b in zip(e, e[1:])):
            raise InputError(f"index set must be strictly ascending: {e}")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, j):
        return j in self.elements

    def __str__(self):
        return "{" + ",".join(str(j) for j in self.elements) + "}"

    def position(self, j):
        """0-based position of j within the ascending tuple."""
        return self.elements.index(j)

    def replace(self, old, new):
        """In-place substitution old -> new; order is kept, so this is a tuple."""
        return IndexTuple(tuple(new if e == old else e for e in self.elements))


@dataclass(frozen=True)
class IndexTuple:
    """Ordered label; sorting yields an IndexSet plus the permutation parity."""

    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InputError(f"index tuple entries must be distinct: {self.elements}")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def sorted(self):
        return sort_with_sign(self)


def sort_with_sign(tup):
    """Sort a tuple of distinct indices; return (IndexSet, parity in {+1,-1})."""
    elems = list(tup.elements if isinstance(tup, IndexTuple) else tup)
    if len(set(elems)) != len(elems):
        raise InputError(f"duplicate entries in {elems}")
    sign = 1
    for i in range(1, len(elems)):
        j = i
        while j > 0 and elems[j - 1] > elems[j]:
            elems[j - 1], elems[j] = elems[j], elems[j - 1]
            sign = -sign
            j -= 1
    return IndexSet(tuple(elems)), sign


def alpha_J(alpha, J):
    """Sum of the parameter entries indexed by J."""
    return sum(alpha[j] for j in J)


@lru_cache(maxsize=None)
def enumerate_J(shape):
    """All (k+1)-subsets of {0,...,k+n+1}, lexicographic."""
    return tuple(IndexSet(c) for c in combinations(range(shape.ncols), shape.k + 1))


@lru_cache(maxsize=None)
def enumerate_J_dot(shape):
    """The ordered basis J_dot: subsets containing 0, omitting k+n+1, lexicographic."""
    return tuple(IndexSet((0,) + c) for c in combinations(range(1, shape.last), shape.k))


@lru_cache(maxsize=None)
def _j_dot_positions(shape):
    return {J: l for l, J in enumerate(enumerate_J_dot(shape))}


def j_dot_position(shape, J):
    """O(1) position of J within enumerate_J_dot(shape)."""
    return _j_dot_positions(shape)[J]


@lru_cache(maxsize=None)
def enumerate_pJq(p, q, shape):
    """The r subsets containing p and omitting q, ordered lexicographically
    by the shared k-subset J - {p}.

    This default order pairs position l of (p,q) with position l of (q,p)
    through the p <-> q swap, which makes the mixed pairing matrices of
    swap-matched label lists diagonal.
    """
    if p == q:
        raise InputError(f"need p != q, got p = q = {p}")
    if not (0 <= p <= shape.last and 0 <= q <= shape.last):
        raise InputError(f"indices out of range: p={p}, q={q}")
    universe = [e for e in range(shape.ncols) if e != p and e != q]
    return tuple(
        IndexSet(tuple(sorted(ksub + (p,)))) for ksub in combinations(universe, shape.k)
    )


@lru_cache(maxsize=None)
def _aligned_tuples_iJ0(i, shape):
    """Defining tuples of the alignment of {J : 0 in J, i not in J} along J_dot:
    the l-th tuple is J^l itself if i is absent, else J^l with i replaced in
    place by k+n+1."""
    if not (1 <= i <= shape.last):
        raise InputError(f"index i out of range: {i}")
    out = []
    for J in enumerate_J_dot(shape):
        if i in J:
            out.append(tuple(shape.last if e == i else e for e in J.elements))
        else:
            out.append(J.elements)
    return tuple(out)


@lru_cache(maxsize=None)
def aligned_iJ0(i, shape):
    """Aligned list of {J : 0 in J, i not in J} as (sorted IndexSet, sign) pairs."""
    return tuple(sort_with_sign(t) for t in _aligned_tuples_iJ0(i, shape))


@lru_cache(maxsize=None)
def aligned_0Ji(i, shape):
    """Aligned list of {J : i in J, 0 not in J}: the leading 0 of each defining
    tuple of aligned_iJ0 is replaced by i.  Returns (sorted IndexSet, sign) pairs."""
    return tuple(
        sort_with_sign((i,) + t[1:]) for t in _aligned_tuples_iJ0(i, shape)
    )


def in_J_circ(J, shape):
    """Whether the minor labeled J genuinely depends on the variables: J must
    not contain all of {1,...,k} and must meet {k+1,...,k+n}."""
    elems = set(J.elements if isinstance(J, IndexSet) else J)
    lower = set(range(1, shape.k + 1))
    middle = set(range(shape.k + 1, shape.k + shape.n + 1))
    return not lower.issubset(elems) and bool(middle & elems)


@lru_cache(maxsize=None)
def enumerate_J_circ(shape):
    """The labels whose minors depend on x, with a cardinality guard: their
    number must equal C(k+n+2, k+1) - (k+n+2)."""
    out = tuple(J for J in enumerate_J(shape) if in_J_circ(J, shape))
    expected = comb(shape.ncols, shape.k + 1) - shape.ncols
    if len(out) != expected:
        raise InternalCheckError(
            f"J_circ cardinality {len(out)} != expected {expected} for {shape}"
        )
    return out
