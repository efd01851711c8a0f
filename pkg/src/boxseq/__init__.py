"""Exact tools for sequences of vectors in the cube [-1, 1]^d.

Minimality checks, Steinitz orderings, the pigeonhole decomposer, sign-matrix
search and lower-bound constructions, all over exact rationals.
"""

from .box import VectorSequence, VerificationReport, is_tau_witness, kstar_check, min_box_subset
from .decompose import decompose
from .steinitz import steinitz_order

__version__ = "0.1.0"

__all__ = [
    "VectorSequence",
    "VerificationReport",
    "decompose",
    "is_tau_witness",
    "kstar_check",
    "min_box_subset",
    "steinitz_order",
]
