"""Exact toolkit for locally nilpotent derivations on affine varieties:
shear/overshear flows, flexibility and bounded-degree density
certificates, compatible pairs, unit obstructions, and plane
automorphism decomposition."""

from .errors import (
    ArityMismatch,
    InternalInvariantError,
    LndLabError,
    OvershearConditionViolated,
    PointNotOnVariety,
    PolyParseError,
    RingMismatch,
    ShearConditionViolated,
    TangencyError,
    UncertifiedDerivation,
)
from .polyalg import (
    GaussianRational,
    Polynomial,
    Ring,
    evaluate,
    parse_poly,
    partial,
    poly_arith,
    substitute,
)
from .idealquot import (
    GroebnerBasis,
    MonomialOrder,
    RingElement,
    grevlex,
    groebner,
    in_ideal,
    lex,
    normal_form,
)
from .fields import (
    AffineVariety,
    Derivation,
    FlowMap,
    HybridFlow,
    Inconclusive,
    LNDCertificate,
    OvershearField,
    PolynomialFlow,
    check_lnd,
    eval_flow,
    flow_lnd,
    flow_overshear,
    lie_bracket,
    make_derivation,
    make_overshear,
    make_shear,
    phi1,
)
from .denslab import (
    FlexReport,
    PairReport,
    SaturationReport,
    check_compatible_pair,
    flexible_at,
    kernel_basis,
    lie_saturate,
    lnd_annihilates_units,
    overshear_generators,
    tangent_basis,
    tangent_field_basis,
    verify_unit_witness,
)
from .tame import (
    AffineFactor,
    BracketFlowReport,
    DecompositionInconclusive,
    ElementaryFactor,
    FactorList,
    FixedTimeFlow,
    Grid,
    PolyMap,
    bracket_flow_check,
    compare_on_grid,
    compose_maps,
    jvdk_decompose,
)
from .catalog import (
    VarietyBundle,
    affine_space,
    bundle_by_name,
    danielewski,
    gl2,
    koras_russell,
    sl2,
)

__version__ = "0.1.0"
