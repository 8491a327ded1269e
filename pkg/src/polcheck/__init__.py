"""polcheck: exact verification of polynomial functional equations
satisfied by generalized polynomials over computable characteristic-zero
fields."""

__version__ = "0.1.0"

from .errors import (
    ArityTooLarge,
    DenominatorVanishes,
    DictionaryInsufficient,
    DivisionByZero,
    InconsistentPeeling,
    InvalidImage,
    NameResolutionError,
    ParseError,
    PolcheckError,
    SpecMismatch,
    TypeMismatch,
    UnsupportedSpec,
)
from .fields import (
    FieldElement,
    FieldSpec,
    field_arith,
    format_element,
    normalize,
    parse_element,
    substitute,
)
from .forms import (
    ConstForm,
    FormProduct,
    GenMonomial,
    LinComb,
    Lift,
    MapOfProduct,
    ProductSym,
    SymmetricForm,
    delta,
    delta_many,
    eval_form,
    polarization_check,
    polarize,
    trace,
    zero_trace_implies_zero_check,
)
from .funceq import (
    HOLDS_ON_SAMPLE,
    HOLDS_ON_SPAN,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    REFUTED,
    Classification,
    EquationReport,
    LogExp,
    PolySpec,
    TwoExp,
    Witness,
    affine_check,
    check_pointwise,
    check_power_identity,
    check_symmetrized,
    check_values,
    classify_quadratic_square,
    degree_precheck,
    levicivita_verify,
    quartic_solve,
)
from .genpoly import (
    NO_BOUND_FOUND,
    GenPoly,
    degree_estimate,
    eval_genpoly,
    extract_component,
    genpoly_from,
    variety_rank,
)
from .maps import (
    ADDITIVE,
    LEIBNIZ,
    MULTIPLICATIVE,
    AdditiveMap,
    apply_map,
    build_derivation,
    build_endomorphism,
    compose_maps,
    identity_map,
    scale_map,
    sum_maps,
    verify_map_laws,
    zero_map,
)
from .oracle import Oracle, SampleConfig, from_element, matches, oracle_eval, random_element
from .session import (
    ReportDocument,
    RunOptions,
    Session,
    default_probes,
    default_span_generators,
    emit_report,
    format_session,
    parse_session,
    run_session,
)

__all__ = [name for name in dir() if not name.startswith("_")]
