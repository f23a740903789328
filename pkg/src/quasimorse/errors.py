"""Exception types raised by the solvers and the particle integrator."""


class QuasiMorseError(Exception):
    """Base class for all toolkit errors."""


class SingularPotentialError(QuasiMorseError):
    """The regime constant is undefined (l**2 == C*l**n exactly)."""


class GridTooCoarseError(QuasiMorseError):
    """A radial grid has fewer than the minimum number of nodes."""


class NegativeDensityError(QuasiMorseError):
    """A fitted density dips below the allowed numerical slack."""


class SingularSystemError(QuasiMorseError):
    """A collocation system is rank deficient."""


class ZeroMassBasisError(QuasiMorseError):
    """The mass of the constant-fit basis combination vanishes."""


class NoCompactSolutionError(QuasiMorseError):
    """The support search ran into the scan boundary: no compact state."""


class IntegratorBlowUpError(QuasiMorseError):
    """A particle velocity exceeded the blow-up guard threshold."""
