import random

import pytest

from tablehgm import ParamVector, Shape, TableProblem, XMatrix
from tablehgm.minors import check_in_X
from tablehgm.rationals import rat


@pytest.fixture
def rng():
    return random.Random(20260808)


def random_alpha_nonzero(rng, shape, bound=5):
    """Integer parameter vector with nonzero entries and zero sum."""
    while True:
        tail = [rng.choice([v for v in range(-bound, bound + 1) if v]) for _ in range(shape.ncols - 1)]
        head = -sum(tail)
        if head != 0:
            return ParamVector(shape, tuple([head] + tail))


def random_alpha_statistical(rng, shape, max_abs=3):
    """Integer vector in the finite-support regime with nonzero entries."""
    k, n = shape.k, shape.n
    while True:
        rows = [-rng.randint(1, max_abs) for _ in range(k)]
        cols = [rng.randint(1, max_abs) for _ in range(n)]
        last = rng.choice([v for v in range(-max_abs, max_abs + 1) if v])
        head = -(sum(rows) + sum(cols) + last)
        if head != 0:
            return ParamVector(shape, tuple([head] + rows + cols + [last]))


def random_x(rng, shape, span=23):
    """Random rational variable matrix inside the generic stratum."""
    while True:
        x = XMatrix(
            shape,
            tuple(
                tuple(rat(rng.randint(1, span), rng.randint(1, span)) for _ in range(shape.n))
                for _ in range(shape.k)
            ),
        )
        if not check_in_X(x):
            return x


def random_margins(rng, r, total):
    """r positive integers summing to total (requires total >= r)."""
    cuts = sorted(rng.sample(range(1, total), r - 1)) if r > 1 else []
    return tuple(b - a for a, b in zip([0] + cuts, cuts + [total]))


def random_problem(rng, r1, r2, total, span=9):
    """Random table problem with positive margins and probabilities."""
    while True:
        rs = random_margins(rng, r1, total)
        cs = random_margins(rng, r2, total)
        if all(rs) and all(cs):
            break
    probs = tuple(
        tuple(rat(rng.randint(1, span), rng.randint(1, span)) for _ in range(r2))
        for _ in range(r1)
    )
    return TableProblem(rs, cs, probs)


def small_shapes(max_sum):
    return [Shape(k, n) for k in range(1, max_sum) for n in range(1, max_sum) if k + n <= max_sum]
