"""Exact computations with retractions of polynomial rings and exponential maps."""

from .field import GF, QQ, Field, parse_field
from .poly import DegreeCapError, NotDivisible, Polynomial, RingMismatch, exact_divide
from .parse import ParseError, format_polynomial, parse_images, parse_polynomial
from .endo import EndoMap, NotNormalizable, is_retraction, kernel_principal_check, normalize_generators

__version__ = "0.1.0"
