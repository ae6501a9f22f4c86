"""Exception and warning types raised by hlslab."""

from __future__ import annotations


class HLSError(Exception):
    """Base class for every error raised by the library."""


class ExponentError(HLSError, ValueError):
    """Invalid dimension / exponent combination for the requested regime."""


class UnsupportedDimension(ExponentError):
    """Dimension outside the supported range 2..6."""


class SingularPoint(HLSError, ValueError):
    """A point lies on (or numerically at) a pole of a map."""


class SingularEvaluation(HLSError, ValueError):
    """A kernel was evaluated too close to its singularity."""


class BoundarySingularity(HLSError, ValueError):
    """A radial reduction was requested on the sphere where it blows up."""


class NonFiniteValue(HLSError, ArithmeticError):
    """A NaN or infinity appeared in a quadrature sum."""


class NegativeValueUnderFractionalPower(HLSError, ValueError):
    """Negative sample values passed to a fractional or negative power."""


class NonnegativityRequired(HLSError, ValueError):
    """The operation is only defined for nonnegative grid functions."""


class ZeroDenominator(HLSError, ZeroDivisionError):
    """A quotient was requested with an identically vanishing factor."""


class NoConvergence(HLSError, RuntimeError):
    """An iterative procedure stopped before meeting its tolerance.

    Parameters
    ----------
    message : str
        Human readable description.
    value : object, optional
        Best value (or last iterate) reached.
    error_estimate : float, optional
        Last available error estimate.
    level : int, optional
        Refinement level or iteration count at which the procedure stopped.
    """

    def __init__(self, message, value=None, error_estimate=None, level=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.level = level


class PositivityLoss(HLSError, ArithmeticError):
    """The fixed-point iterate kept hitting the positivity floor."""

    def __init__(self, message, iterate=None, iteration=None):
        super().__init__(message)
        self.iterate = iterate
        self.iteration = iteration


class TailTruncationWarning(UserWarning):
    """Emitted when an unbounded domain is cut off at a finite radius."""


class ClampWarning(UserWarning):
    """Emitted when zero samples are clamped before a fractional power."""
