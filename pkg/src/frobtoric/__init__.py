"""Frobenius lifts, de Rham splittings and Bott vanishing on toric varieties, checked by exact arithmetic."""
from .cech import (
    CechEngine,
    DimTable,
    Interval,
    ToricDivisor,
    ample_check,
    bott_verify,
    cohomology_dims,
    default_box,
    degeneration_check,
    sigma_verify,
)
from .errors import (
    CapacityError,
    ChartMismatch,
    DegeneratePairing,
    FanAxiomViolation,
    FrobToricError,
    InconsistentInput,
    InternalInconsistency,
    NotCartier,
    ParseError,
)
from .fanfile import FanSpec, parse_fan_file, parse_fan_text
from .forms import TorusForm, cartier, chart_membership, d, duality_split, sigma_split, wedge, zb_subspaces
from .lattice import (
    Cone,
    Fan,
    betti_oracle,
    dual_cone,
    faces,
    hilbert_basis,
    hirzebruch,
    is_complete,
    is_smooth,
    is_strongly_convex,
    product_fan,
    projective_space,
    validate_fan,
    weighted_p112,
)
from .monomial import MonomialElement, frobenius_lift_chart, phi, verify_glue_compat
from .oracles import (
    SheafDimSpec,
    ShortExactSequence,
    bott_pn,
    incidence_nonvanishing,
    les_chase,
    quadric_nonvanishing,
)
from .witt import WittPair, p_multiply, w2_add, w2_iso_zp2, w2_mul

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CechEngine",
    "ChartMismatch",
    "Cone",
    "DegeneratePairing",
    "DimTable",
    "Fan",
    "FanAxiomViolation",
    "FanSpec",
    "FrobToricError",
    "InconsistentInput",
    "InternalInconsistency",
    "Interval",
    "MonomialElement",
    "NotCartier",
    "ParseError",
    "SheafDimSpec",
    "ShortExactSequence",
    "ToricDivisor",
    "TorusForm",
    "WittPair",
    "ample_check",
    "betti_oracle",
    "bott_pn",
    "bott_verify",
    "cartier",
    "chart_membership",
    "cohomology_dims",
    "d",
    "default_box",
    "degeneration_check",
    "dual_cone",
    "duality_split",
    "faces",
    "frobenius_lift_chart",
    "hilbert_basis",
    "hirzebruch",
    "incidence_nonvanishing",
    "is_complete",
    "is_smooth",
    "is_strongly_convex",
    "les_chase",
    "p_multiply",
    "parse_fan_file",
    "parse_fan_text",
    "phi",
    "product_fan",
    "projective_space",
    "quadric_nonvanishing",
    "sigma_split",
    "sigma_verify",
    "validate_fan",
    "verify_glue_compat",
    "w2_add",
    "w2_iso_zp2",
    "w2_mul",
    "wedge",
    "weighted_p112",
    "zb_subspaces",
]
