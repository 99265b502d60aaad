"""Exact computations for 2-groups built from alternating form families,
their sphere actions, and the rank bounds that constrain them."""

__version__ = "0.1.0"

from .errors import GuardExceeded, NonSquareSystemError, SchemaError
from .gf2 import BitMatrix, BitVector, Subspace

__all__ = [
    "BitMatrix",
    "BitVector",
    "Subspace",
    "GuardExceeded",
    "NonSquareSystemError",
    "SchemaError",
    "__version__",
]
