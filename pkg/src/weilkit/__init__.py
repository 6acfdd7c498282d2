"""weilkit: exact computation in Weil algebras — truncated-polynomial
quotient arithmetic, lifts of smooth maps through nilpotent extensions
(higher-order forward-mode differentiation), and seeded property suites
for the categorical identities the construction satisfies.
"""

from .algebras import (
    PRESETS,
    RATIONAL,
    REAL,
    WeilAlgebra,
    WeilElement,
    WeilMorphism,
    WeilPresentation,
    apply_morphism,
    compose_morphism,
    elements_close,
    identity_morphism,
    jet_algebra,
    mk_morphism,
    mk_weil_algebra,
    preset_algebra,
    real_line_algebra,
    scalars_close,
    tensor,
    tensor_morphism,
    zero_morphism,
)
from .errors import (
    AlgebraMismatch,
    BasePointViolation,
    ConfigError,
    DegreeOverflow,
    DomainError,
    IdealViolation,
    ImproperIdeal,
    ParseError,
    ScalarModeError,
    WeilkitError,
)
from .expressions import (
    SmoothMap,
    compose_maps,
    eval_map_float,
    format_expr,
    format_map,
    map_polynomials,
    pair_maps,
    parse_smooth_map,
)
from .funcalg import (
    CarrierPoint,
    CarrierSpace,
    CurriedValue,
    CurryIso,
    Domain,
    DomainMorphism,
    WeilPoly,
    carrier_space,
    check_coproduct_currying,
    check_product_splitting,
    compose_domain_morphisms,
    curry_iso,
    domain_coproduct,
    identity_domain_morphism,
    induced_action,
    postcompose,
    probe_functoriality,
    unit_domain,
)
from .lifting import (
    AssociativityIso,
    EquivalenceVerdict,
    Euclidean,
    Product,
    Prolonged,
    WPoint,
    assoc_iso,
    check_naturality,
    check_product_preservation,
    class_of,
    cross_action,
    equiv_mod,
    identity_map,
    lift_with_fallback,
    prolong_space,
    taylor_lift,
    taylor_lift_at,
)
from .polynomials import Monomial, Polynomial, parse_polynomial
from .reports import TOOL_VERSION, Report, SuiteReport, render_report
from .suites import SuiteConfig, default_config, load_config, parse_config, run_suite

__version__ = TOOL_VERSION
