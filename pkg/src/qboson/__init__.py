"""Exact symbolic verifier for a two-boson realization of the quantum
affine algebra U_q(sl2-hat) at level -1/2, with q-vertex operators."""

from .repcheck import check_drinfeld, check_screening, hw_verify, \
    kernel_character
from .reports import VerificationReport
from .scalars import UScalar, qint
from .series import TruncatedSeries
from .vertexops import VertexPair, check_intertwining, two_point

__all__ = [
    "TruncatedSeries",
    "UScalar",
    "VerificationReport",
    "VertexPair",
    "check_drinfeld",
    "check_intertwining",
    "check_screening",
    "hw_verify",
    "kernel_character",
    "qint",
    "two_point",
]
__version__ = "0.1.0"
