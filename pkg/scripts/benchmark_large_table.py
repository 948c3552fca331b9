"""Timing run for a large-margin 4x4 problem on the exact backend.

Usage: python scripts/benchmark_large_table.py [TOTAL] [SEED] [--float]
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tablehgm import EvalOptions, TableProblem, evaluate
from tablehgm.rationals import rat, rat_to_decimal_str


def random_margins(rng, r, total):
    while True:
        cuts = sorted(rng.sample(range(1, total), r - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        if all(v >= 2 for v in parts):
            return tuple(parts)


def main(total=200, seed=11, backend="exact"):
    rng = random.Random(seed)
    rs = random_margins(rng, 4, total)
    cs = random_margins(rng, 4, total)
    probs = tuple(
        tuple(rat(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(4))
        for _ in range(4)
    )
    problem = TableProblem(rs, cs, probs)
    print(f"margins: rows {rs}, cols {cs}, backend {backend}")
    t0 = time.perf_counter()
    res = evaluate(problem, EvalOptions(backend=backend))
    elapsed = time.perf_counter() - t0
    if backend == "exact":
        bits = int(res.Z.numerator).bit_length() + int(res.Z.denominator).bit_length()
        print(f"Z = {rat_to_decimal_str(res.Z, 12)} ({bits} bits as a fraction)")
    else:
        print(f"Z = {res.Z!r}")
        span = res.diagnostics.dynamic_range_digits
        print(
            f"dynamic range traversed: ~{span:.0f} digits"
            + (" (binary64 result unreliable; use exact)" if span > 12 else "")
        )
    print(f"path length e = {res.diagnostics.e}")
    print(f"elapsed: {elapsed:.2f} s (gradients included)")


if __name__ == "__main__":
    argv = sys.argv[1:]
    backend = "float" if "--float" in argv else "exact"
    nums = [int(a) for a in argv if not a.startswith("--")]
    total = nums[0] if len(nums) > 0 else 200
    seed = nums[1] if len(nums) > 1 else 11
    main(total, seed, backend)
