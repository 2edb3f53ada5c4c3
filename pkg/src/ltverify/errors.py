"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class BracketError(ValueError):
    """Root bracket without a sign change."""


class ContractError(ValueError):
    """Input violates a structural precondition (symmetry, orthonormality, sign)."""


class ResourceError(RuntimeError):
    """Requested computation exceeds the memory/time budget."""


class UnsupportedError(ValueError):
    """Value not available (no formula or table entry)."""


class DerivationError(RuntimeError):
    """A derivation step found no admissible solution."""


class AccuracyError(RuntimeError):
    """Numerical estimate failed to reach the requested tolerance.

    The best estimate obtained is kept on ``estimate`` together with the
    error estimate on ``error``.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
