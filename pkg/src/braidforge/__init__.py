"""Twisted Long-Moody constructions for representations of
F_n x| B_n, Haraoka's multiplicative convolution, invariant Hermitian forms,
and numerical checks tying them together.
"""
from .errors import BraidforgeError, InvalidInputError, ParseError, PreconditionError, ResourceGuardError
from .linalg import Tolerances

__version__ = "0.1.0"

__all__ = [
    "BraidforgeError",
    "InvalidInputError",
    "ParseError",
    "PreconditionError",
    "ResourceGuardError",
    "Tolerances",
    "__version__",
]
