"""Weighted-shift modules of the odd orthogonal quantized function algebra
and desk-scale certificates for their Gelfand-Kirillov growth."""

from . import diagrams, growth, qoperators, repsoq, weylb
from .growth import (
    algebra_growth,
    homogeneous_certificate,
    module_certificate,
    module_growth,
)
from .repsoq import RepSpec, elementary_table, rep_table
from .weylb import SignedPermutation, from_word, length, normal_form

__version__ = "0.1.0"

__all__ = [
    "diagrams", "growth", "qoperators", "repsoq", "weylb",
    "RepSpec", "SignedPermutation",
    "algebra_growth", "elementary_table", "from_word",
    "homogeneous_certificate", "length", "module_certificate",
    "module_growth", "normal_form", "rep_table",
]
