"""Shared exception types."""


class CapabilityError(RuntimeError):
    """Requested computation exceeds a configured size/order cap."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature cannot reach the requested accuracy."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or too close to) a pole."""


class BranchError(ArithmeticError):
    """Fractional power requested off the positive branch."""


class ExactnessError(TypeError):
    """Exact arithmetic requested on inexact (floating) data."""
