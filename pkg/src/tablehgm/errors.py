"""Exception hierarchy.

Three tiers matter to callers: input/validation problems, violated
mathematical preconditions (the computation was refused, not wrong), and
internal consistency failures (a guard tripped, the build is suspect).
The CLI maps them to exit codes 2 / 3 / 4.
"""


class TableHgmError(Exception):
    """Base error for this package."""


class InputError(TableHgmError, ValueError):
    """Malformed or inconsistent input (bad file, bad sums, bad dimensions)."""


class PreconditionError(TableHgmError, ValueError):
    """A mathematical precondition failed; the requested value is undefined here."""


class ZeroAlphaError(PreconditionError):
    """A parameter combination that must be nonzero is zero."""


class SingularMinorError(PreconditionError):
    """A minor that must be nonzero vanishes at the given variable matrix."""


class XNotGenericError(PreconditionError):
    """The variable matrix lies outside the generic stratum X."""

    def __init__(self, vanishing):
        self.vanishing = tuple(vanishing)
        names = ", ".join(str(j) for j in self.vanishing)
        super().__init__(f"variable matrix not generic; vanishing minors: {names}")


class RegimeError(PreconditionError):
    """Parameters outside the finite-support (statistical) regime."""


class PathStepError(PreconditionError):
    """A parameter path step is invalid (zero intermediate entry or scalar pole)."""


class SingularMatrixError(TableHgmError):
    """Exact elimination hit a singular matrix that theory says is invertible."""


class InternalCheckError(TableHgmError):
    """An internal invariant failed; indicates a bug, not bad input."""
