"""Case decompositions, assembly, factored local zeta functions and residue oracles."""

from .cases import (
    CASES,
    AssemblyError,
    CaseFormula,
    assemble_ID1,
    assemble_ID2,
    assemble_Z,
    domain_size,
    id1_cases,
    id2_cases,
    j_integrals,
    multiplicities,
    solve_fixed_point,
    subcase_integrals,
)
from .oracle import (
    TARGETS,
    CoordinateGroup,
    Domain,
    ExponentTerm,
    IntegrandSpec,
    OracleResult,
    TractabilityError,
    oracle_residue_enum,
    target_value,
)
from .reference import display, display_in_terms_of_id1, from_q_notation
from .zeta import (
    DomainError,
    FactoredZeta,
    NotDirichletFactor,
    beta_invariant,
    dirichlet_nonnegativity,
    euler_abscissa,
    local_zeta,
    pole_abscissas,
    published_zeta,
    series_coefficients,
    specialize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
