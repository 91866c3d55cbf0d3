"""Exception types shared across the package."""


class TorusDimersError(Exception):
    """Base class for all package-specific errors."""


class NotValidLattice(TorusDimersError):
    """Input vectors do not generate a valid (same-parity, full-rank) lattice."""


class AreaCapExceeded(TorusDimersError):
    """Enumeration refused because the fundamental domain exceeds the area cap."""


class FluxOutsideQ(TorusDimersError):
    """Flux value lies outside the closed unit diamond, so extremal heights diverge."""


class InvalidFlipSite(TorusDimersError):
    """The requested 2x2 window is not tiled by two parallel dominoes."""


class ResidualTooLarge(TorusDimersError):
    """Numerical coefficient recovery left a rounding residual above tolerance."""


class InconsistentSigns(TorusDimersError):
    """Observed monomial signs do not follow the odd-one-out parity pattern."""


class PatternViolation(TorusDimersError):
    """A pair of fluxes violates the expected sign pattern."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class PrecisionInsufficient(TorusDimersError):
    """Working precision too low to round a product formula to a certified integer."""
