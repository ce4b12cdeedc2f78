"""Exception hierarchy shared across the package."""


class AngleOptError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AngleOptError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatchError(AngleOptError, ValueError):
    """Operands live on spheres of different ambient dimension."""


class StructureError(AngleOptError, ValueError):
    """A composite object violates one of its structural invariants."""


class FalsificationError(AngleOptError, RuntimeError):
    """A quantity proved to satisfy a bound was computed to violate it."""
