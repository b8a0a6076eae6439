"""Exception types shared across the package."""


class SymbidiscError(Exception):
    """Base class for all package errors."""


class ValidationError(SymbidiscError):
    """Input violates a documented precondition."""


class PolePointError(SymbidiscError):
    """The magic function was evaluated at its excluded point (z*s = 2)."""


class RootFindingError(SymbidiscError):
    """Polynomial root extraction failed to converge."""


class NotExtremalError(SymbidiscError):
    """Nevanlinna-Pick data is not extremally solvable."""


class ScalarMatrixError(SymbidiscError):
    """A 2x2 target matrix is a scalar multiple of the identity; the
    trace/determinant reduction is not faithful for such targets."""


class SpectralRadiusError(SymbidiscError):
    """A spectral target falls outside the admissible region."""


class SearchBudgetError(SymbidiscError):
    """A search exhausted its budget without reaching the resolution target."""
