"""Exception types shared across the package."""


class ErdosError(Exception):
    """Base class; ``kind`` is the short tag printed by the CLI."""

    kind = "error"


class DomainError(ErdosError, ValueError):
    kind = "domain"


class RangeError(ErdosError, ValueError):
    """Argument lies outside the range an accumulator or table covers."""

    kind = "range"


class CapacityError(ErdosError):
    """Not enough primes were sieved for the requested number of terms."""

    kind = "capacity"


class PrecisionError(ErdosError):
    """Truncation or rounding would swamp the quantity being measured."""

    kind = "precision"
