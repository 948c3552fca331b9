"""Worked 3x3 example: margins (2,3,3) x (1,3,4) with simple rational odds.

Prints the exact normalizing constant, the expectation table, one gradient
entry, and the parameter path, then cross-checks everything against the
brute-force enumeration oracle.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tablehgm import EvalOptions, TableProblem, evaluate
from tablehgm.rationals import rat_to_decimal_str, rat_to_str


def main():
    problem = TableProblem.of(
        (2, 3, 3),
        (1, 3, 4),
        [["1", "1/2", "1/3"], ["1", "1/5", "1/7"], ["1", "1", "1"]],
    )
    result = evaluate(problem, EvalOptions(oracle=True))
    diag = result.diagnostics
    print(f"Z       = {rat_to_str(result.Z)}")
    print(f"        = {rat_to_decimal_str(result.Z, 15)}")
    print(f"path    : e = {diag.e}, steps = {list(diag.path)}")
    print(f"oracle  : match = {diag.oracle['match']}")
    print("E[U]    :")
    for row in result.expectations:
        print("   ", "  ".join(f"{rat_to_decimal_str(v, 6):>10}" for v in row))
    g = result.gradients[0][0][0][0]
    print(f"dE[U_11]/dx_11 = {rat_to_str(g)} = {rat_to_decimal_str(g, 6)}")
    print(f"time    : {diag.millis:.1f} ms")


if __name__ == "__main__":
    main()
