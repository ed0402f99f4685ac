"""Error types shared across the package.

Plain ``ValueError`` is used for bad arguments (invalid dimension, odd chain
length, out-of-range parameters); the classes below mark conditions the CLI
maps to dedicated exit codes or that carry extra state.
"""


class SizeGuardError(RuntimeError):
    """A requested computation would exceed a memory guard.

    The message names the offending dimension so callers can adjust.
    """


class ConvergenceError(RuntimeError):
    """An iteration failed to converge; carries the last iterate."""

    def __init__(self, message: str, last_value: float):
        super().__init__(message)
        self.last_value = last_value


class DegenerateFitError(RuntimeError):
    """A fit target is degenerate (series already at its plateau)."""


class DegenerateBasisError(RuntimeError):
    """The overlap matrix of the site basis is singular."""


class NumericalFailureError(RuntimeError):
    """A contraction produced a value outside its tolerance band."""
