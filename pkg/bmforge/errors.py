"""
Error Hierarchy

Every failure the pipeline can report is a ``BMForgeError``. The
``exit_code`` attribute is what the command line returns for it.
"""

from __future__ import annotations

from typing import Optional


class BMForgeError(Exception):
    """Base class for all pipeline failures."""

    exit_code: int = 1


class InvalidSamples(BMForgeError, ValueError):
    """Sampled data violates a type invariant."""


# weights / hilbert
class GridTooShort(BMForgeError):
    """Grid has too few points or does not reach far enough."""


class NegativeLogWeight(BMForgeError):
    """A log-weight sample is negative."""


class TailNotIntegrable(BMForgeError):
    """The weighted tail of an integrand does not settle."""


class SymmetryViolated(BMForgeError):
    """An operation requiring a symmetry tag received an untagged function."""


# onedim
class NotAdmissible(BMForgeError):
    """The weight fails the admissibility hypotheses."""

    exit_code = 2


class LeakageTooHigh(BMForgeError):
    """Measured spectral leakage exceeds the configured ceiling."""

    exit_code = 3

    def __init__(self, ratio: float, ceiling: float, message: Optional[str] = None):
        self.ratio = ratio
        self.ceiling = ceiling
        super().__init__(message or f"leakage ratio {ratio:.3e} exceeds ceiling {ceiling:.3e}")


class CandidateVanished(BMForgeError):
    """The construction produced the zero function."""


class ZeroDetectionFailed(BMForgeError):
    """No finite zero order up to the configured maximum was found."""


# bessel
class OrderOutOfRange(BMForgeError):
    """Bessel order outside the representation's range."""


class ArgumentTooSmall(BMForgeError):
    """Argument below the closed-form threshold with series fallback disabled."""


class DimensionNotOdd(BMForgeError):
    """Operation needs an odd dimension."""


class DimensionTooLarge(BMForgeError):
    """Dimension above the configured ceiling."""


class ParameterWindowViolated(BMForgeError):
    """Sonine parameters outside the validity window."""


class TailNotConverged(BMForgeError):
    """Averaged truncations of an improper integral disagree."""


# radial
class DimensionNotEven(BMForgeError):
    """Operation needs an even dimension."""


class DimensionInvalid(BMForgeError):
    """Dimension below one."""


# majorize
class EvaluationFailed(BMForgeError):
    """A user supplied weight could not be evaluated."""


class GammaOutOfRange(BMForgeError):
    """Decay exponent outside (0, d+1)."""

    exit_code = 5


class HolderChainDiverged(BMForgeError):
    """The dyadic series of the reduction diverges."""

    exit_code = 6


class MajorizationViolated(BMForgeError):
    """A candidate exceeds its weight."""


# cli
class ParseError(BMForgeError):
    """Input file or expression could not be parsed."""

    exit_code = 4
