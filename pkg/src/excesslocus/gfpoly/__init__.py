"""Finite-field laboratory: forms over F_{p^m}, point enumeration, excess
locus decision procedures and tuple enumeration."""

from .field import FieldSpec, embedding, extension, field_from_q, field_make
from .forms import (
    Form,
    TupleInstance,
    count_projective_points,
    evaluate,
    monomial_rank,
    monomials,
    projective_points,
    rational_subspaces,
)
from .lab import (
    CountReport,
    SizeGuardExceeded,
    enumerate_locus,
    estimate_codim_sweep,
    predicted_codim,
    reports_from_json,
    reports_to_csv,
    reports_to_json,
)
from .oracles import (
    DimCertificate,
    UnsupportedOracle,
    common_component_test,
    default_m_max,
    positive_dim_test,
)

__all__ = [
    "FieldSpec",
    "field_make",
    "field_from_q",
    "extension",
    "embedding",
    "Form",
    "TupleInstance",
    "evaluate",
    "monomials",
    "monomial_rank",
    "projective_points",
    "count_projective_points",
    "rational_subspaces",
    "DimCertificate",
    "UnsupportedOracle",
    "positive_dim_test",
    "common_component_test",
    "default_m_max",
    "CountReport",
    "SizeGuardExceeded",
    "enumerate_locus",
    "estimate_codim_sweep",
    "predicted_codim",
    "reports_to_csv",
    "reports_to_json",
    "reports_from_json",
]
