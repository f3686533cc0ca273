"""Exact computational passage between left braces and left-nilpotent
pre-Lie rings on finite abelian p-groups of order p**n with n < p - 1.

The forward direction averages the transported star product on the
quotient by ann(p^2); the backward direction builds the group of flows of
the twisted ring; the reconstruction pipeline certifies that the round
trip returns the original brace modulo ann(p^4).  All arithmetic is exact.
"""

from __future__ import annotations

from .braces import (
    Brace,
    FactorBrace,
    factor_brace,
    ideal_quotient,
    left_chain,
    quoted_identity_report,
    trivial_brace,
    verify_brace,
)
from .correspondence import (
    DerivedPreLie,
    SectionPermutation,
    ShiftSeries,
    circle_power_section,
    derive,
    identity_recovery_coefficients,
    reconstruct_brace,
    reconstruction_report,
    section_bijection_report,
    section_permutation,
    star_recovery_coefficients,
    verify_derived_ring,
    verify_flows_roundtrip,
    verify_identity_recovery,
    verify_star_recovery,
)
from .errors import InputError, StructureError
from .fixtures import Fixture, example_suite, search_mixed_ring
from .flows import FlowContext, flows_brace
from .formats import (
    InputDocument,
    build,
    document_from,
    parse,
    parse_file,
    serialize,
    serialize_document,
)
from .groups import (
    Element,
    PGroup,
    QuotientSpace,
    Span,
    Subgroup,
    additive_span,
    divide_by_p,
    quotient,
)
from .padic import (
    ScalarRing,
    binomial,
    inverse_factorial,
    is_prime,
    primitive_root,
    teichmuller_unit,
    twist_constant,
)
from .prelie import (
    PreLieRing,
    factor_ring,
    nilpotency_index,
    ring_left_chain,
    scalar_twist,
    verify_prelie,
    zero_ring,
)
from .reports import CheckReport, CheckResult

__version__ = "0.1.0"

__all__ = [
    "Brace",
    "CheckReport",
    "CheckResult",
    "DerivedPreLie",
    "Element",
    "FactorBrace",
    "Fixture",
    "FlowContext",
    "InputDocument",
    "InputError",
    "PGroup",
    "PreLieRing",
    "QuotientSpace",
    "ScalarRing",
    "SectionPermutation",
    "ShiftSeries",
    "Span",
    "StructureError",
    "Subgroup",
    "additive_span",
    "binomial",
    "build",
    "circle_power_section",
    "derive",
    "divide_by_p",
    "document_from",
    "example_suite",
    "factor_brace",
    "factor_ring",
    "flows_brace",
    "ideal_quotient",
    "identity_recovery_coefficients",
    "inverse_factorial",
    "is_prime",
    "left_chain",
    "nilpotency_index",
    "parse",
    "parse_file",
    "primitive_root",
    "quoted_identity_report",
    "quotient",
    "reconstruct_brace",
    "reconstruction_report",
    "ring_left_chain",
    "scalar_twist",
    "search_mixed_ring",
    "section_bijection_report",
    "section_permutation",
    "serialize",
    "serialize_document",
    "star_recovery_coefficients",
    "teichmuller_unit",
    "trivial_brace",
    "twist_constant",
    "verify_brace",
    "verify_derived_ring",
    "verify_flows_roundtrip",
    "verify_identity_recovery",
    "verify_prelie",
    "verify_star_recovery",
    "zero_ring",
]
