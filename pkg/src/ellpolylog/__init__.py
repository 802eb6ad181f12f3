"""Numerical toolkit for the elliptic polylogarithm at level N.

The modules build upward from theta functions and Eisenstein series to the D-variant
sections and the coefficients of the de Rham Eisenstein classes."""

__version__ = "0.1.0"

from .errors import ContractError, DomainError, EllPolylogError, EvaluationError, PoleError
from .numeric import DEFAULT_PRECISION, Precision, UpperHalfPoint

__all__ = ["__version__", "Precision", "DEFAULT_PRECISION", "UpperHalfPoint", "EllPolylogError",
           "DomainError", "PoleError", "EvaluationError", "ContractError"]
