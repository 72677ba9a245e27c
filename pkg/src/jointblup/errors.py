"""Exception types shared across the package.

Validation problems (bad inputs, impossible requests) raise plain
ValueError; these classes cover failures of the numerics themselves.
"""


class NumericalError(RuntimeError):
    """A computation failed numerically (ill-conditioning, lost accuracy)."""


class MomentValidationError(NumericalError):
    """Computed order-statistic moments violate their defining identities.

    Carries the achieved residuals so callers can report how far off the
    quadrature ended up.
    """

    def __init__(self, message: str, residuals: dict[str, float] | None = None):
        super().__init__(message)
        self.residuals = residuals or {}
