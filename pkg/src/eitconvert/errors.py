"""Exception and warning types shared across the package."""

from __future__ import annotations

__all__ = [
    "SchemeError",
    "DegenerateSchemeError",
    "GridError",
    "AliasingError",
    "StiffnessError",
    "ConvergenceError",
    "MissingCompanionError",
    "ConfigValidationError",
    "ValidityWarning",
]


class SchemeError(ValueError):
    """Malformed atomic scheme or population input."""


class DegenerateSchemeError(SchemeError):
    """Scheme whose population-weighted sums vanish identically."""


class GridError(ValueError):
    """Numerical grid that cannot represent the requested problem."""


class AliasingError(GridError):
    """Significant spectral energy in the outer region of the frequency grid."""


class StiffnessError(GridError):
    """Time step too large for the fastest rate in the problem."""


class ConvergenceError(RuntimeError):
    """Numerical result failed an internal convergence check."""


class MissingCompanionError(ValueError):
    """Relative efficiency requested without a reference run."""


class ConfigValidationError(ValueError):
    """Declarative config rejected; carries the offending field paths."""

    def __init__(self, message: str, paths=()):
        self.paths = list(paths)
        if self.paths:
            message = f"{message} (fields: {', '.join(self.paths)})"
        super().__init__(message)


class ValidityWarning(UserWarning):
    """Parameter regime outside the stated validity of an approximation."""
