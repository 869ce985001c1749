"""Exception hierarchy shared by the library, the service and the CLI.

Every error carries a short machine-readable ``kind`` string; the CLI prints
``error:<kind>: <message>`` on stderr and the HTTP service returns the same
kind in its error envelope.
"""


class EigenmagError(Exception):
    """Base class for all ``eigenmag`` domain errors."""

    kind = "internal"


class ParseError(EigenmagError):
    """Malformed matrix document text."""

    kind = "parse"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NotHermitian(EigenmagError):
    """Input matrix deviates from Hermitian symmetry beyond tolerance."""

    kind = "not-hermitian"


class DimensionMismatch(EigenmagError):
    """Declared dimension disagrees with the supplied entries."""

    kind = "dimension-mismatch"


class InvalidSpec(EigenmagError):
    """Generator spec with unknown kind or inconsistent parameters."""

    kind = "invalid-spec"


class DimensionTooSmall(EigenmagError):
    """Operation needs a principal minor but the matrix is 1x1."""

    kind = "dimension-too-small"


class ConvergenceFailure(EigenmagError):
    """Implicit-shift iteration exceeded its per-eigenvalue sweep budget."""

    kind = "convergence-failure"


class DegenerateEigenvalue(EigenmagError):
    """Generic per-eigenvalue formula requested inside a cluster."""

    kind = "degenerate-eigenvalue"


class NegativeWeight(EigenmagError):
    """Computed squared magnitude below -1e-9: the input spectra are inconsistent."""

    kind = "negative-weight"


class MatchingFailure(EigenmagError):
    """Too few minor eigenvalues near a cluster: the input spectra are inconsistent."""

    kind = "matching-failure"


class PoleEvaluation(EigenmagError):
    """Resolvent evaluation requested at (or too close to) an eigenvalue of A."""

    kind = "pole-evaluation"
