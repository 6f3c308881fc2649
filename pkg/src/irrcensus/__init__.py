"""Exact census and statistics of irreducible divisors in imaginary
quadratic integer rings."""

from .abelian import (
    ClassOrdering,
    GroupSpec,
    StructuralConstants,
    TypeVector,
    canonical_ordering,
    cyclic_group,
    davenport_constant,
    enumerate_types,
    group_from_orders,
    is_minimal_zero_sum,
    structural_constants,
    trivial_group,
)
from .census import (
    CensusRecord,
    Factorization,
    SiteSystem,
    delta_bruteforce,
    delta_exact,
    delta_lower_bound,
    enumerate_principal,
    for_field,
    for_synth,
    harmonic_sums,
    is_irreducible,
    make_factorization,
    nu_bruteforce,
    nu_exact,
    nu_squarefull_formula,
    sweep,
    write_census_csv,
)
from .errors import DomainError, ResourceLimitError
from .quadratic import (
    ClassGroup,
    FieldSpec,
    PrimeSite,
    QuadForm,
    class_group,
    compose,
    prime_sites_up_to,
    reduce_form,
    splitting_type,
)
from .synth import SynthModel, splitmix64, synth_sites
from .stats import (
    EquidistResult,
    StatReport,
    build_report,
    equidist,
    exceptional_fraction,
    f_central_moment,
    f_value,
    g_mean_check,
    g_predicted,
    gaussian_target,
    landau_check,
    standardize,
    weber_check,
)

__version__ = "0.1.0"
