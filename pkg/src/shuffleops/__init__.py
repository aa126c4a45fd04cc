"""Gröbner bases for shuffle operads and a checker for the Nielsen-Schreier
criterion on varieties of algebras."""

from __future__ import annotations

from .dsl import OpsDocument, format_presentation, parse_document, parse_dsl
from .groebner import TruncatedGB, buchberger, hilbert_series, normal_monomials, quadratic_certificate
from .nschreier import NSReport, check_m1, check_m2, lower_bound_series, verdict
from .ordering import OrderingSpec, make_ordering, preset
from .poly import OperadPolynomial, leading_term, parse_polynomial, reduce
from .presentation import (
    GeneratorSpec,
    Presentation,
    RawIdentity,
    change_generator_basis,
    multilinearize,
    split_basis_change,
)
from .symmetrize import ShufflePresentation, present_shuffle

__version__ = "0.1.0"

__all__ = [
    "GeneratorSpec",
    "NSReport",
    "OperadPolynomial",
    "OpsDocument",
    "OrderingSpec",
    "Presentation",
    "RawIdentity",
    "ShufflePresentation",
    "TruncatedGB",
    "buchberger",
    "change_generator_basis",
    "check_m1",
    "check_m2",
    "format_presentation",
    "hilbert_series",
    "leading_term",
    "lower_bound_series",
    "make_ordering",
    "multilinearize",
    "normal_monomials",
    "parse_document",
    "parse_dsl",
    "parse_polynomial",
    "preset",
    "present_shuffle",
    "quadratic_certificate",
    "reduce",
    "split_basis_change",
    "verdict",
]
