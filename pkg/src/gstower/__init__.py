"""Exact growth invariants of pro-p groups and Z_p-towers."""

from .errors import (
    CapacityError,
    GsTowerError,
    HypothesisError,
    InadmissibleCutError,
    InconclusiveError,
    ModelError,
    NonMinimalPresentationError,
    NonUnitError,
    ParameterError,
    WordSyntaxError,
)
from .free_algebra import (
    AboveTruncation,
    FpSubspace,
    MonomialBasis,
    TruncatedSeries,
    lowest_degree,
    monomial_basis,
    series_add,
    series_inverse,
    series_mul,
    subspace_insert,
)
from .gspoly import (
    GsPolynomial,
    NegativityWitness,
    QCertificate,
    certified_negativity,
    cut,
    evaluate,
    m_lower_bound,
    negativity_witness,
    q_at_tn,
    q_certificate,
    q_polynomial,
    rho_lower_bound,
)
from .presentation import (
    HilbertPrefix,
    Presentation,
    ZassenhausData,
    finite_group_oracle,
    gs_polynomial,
    hilbert_coeffs,
    ideal_truncation,
    relator_depths,
    rho_estimate,
    vinberg_check,
    zassenhaus_dims,
)
from .tower import (
    BoundProfile,
    ClassGroupModel,
    DecompositionModel,
    TowerSpec,
    bound_profile,
    check_hypotheses,
    corollary_constant,
    cyclotomic_spec,
    growth_table,
    local_unit_rank,
    shafarevich_dims,
    thm_constant,
)
from .words import depth, format_word, magnus_expand, parse_word, word_commutator, word_power

__version__ = "0.1.0"
