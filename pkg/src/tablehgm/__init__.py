"""Exact evaluation of two-way contingency-table normalizing constants,
cell expectations, and expectation gradients, by transporting a series
vector along parameter shifts (contiguity maps) and reading derivatives off
the associated integrable connection."""

from .engine import (
    EvalOptions,
    EvalResult,
    TableProblem,
    build_path,
    evaluate,
    expectation_gradients,
    expectations,
    initial_alpha,
    map_problem,
)
from .errors import (
    InputError,
    InternalCheckError,
    PathStepError,
    PreconditionError,
    RegimeError,
    TableHgmError,
    XNotGenericError,
    ZeroAlphaError,
)
from .indexsets import IndexSet, IndexTuple, Shape
from .intersection import ParamVector, SquareMatrixR
from .gauss_manin import GMVector
from .minors import XMatrix
from .rationals import rat, rat_from_str, rat_to_decimal_str, rat_to_str
from .series import oracle_E, oracle_Z

__version__ = "0.1.0"

__all__ = [
    "EvalOptions",
    "EvalResult",
    "GMVector",
    "IndexSet",
    "IndexTuple",
    "InputError",
    "InternalCheckError",
    "ParamVector",
    "PathStepError",
    "PreconditionError",
    "RegimeError",
    "Shape",
    "SquareMatrixR",
    "TableHgmError",
    "TableProblem",
    "XMatrix",
    "XNotGenericError",
    "ZeroAlphaError",
    "build_path",
    "evaluate",
    "expectation_gradients",
    "expectations",
    "initial_alpha",
    "map_problem",
    "oracle_E",
    "oracle_Z",
    "rat",
    "rat_from_str",
    "rat_to_decimal_str",
    "rat_to_str",
    "__version__",
]
