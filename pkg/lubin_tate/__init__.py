"""
Lubin-Tate formal groups, their endomorphisms and condensation.
"""
from .formal_group import (
    FormalGroup,
    FrobeniusSeries,
    GroupAxiomReport,
    build_formal_group,
    endomorphism,
    frobenius_chain,
    verify_frobenius_chain,
    verify_group_axioms,
)
from .condense import CondensationReport, CondensationSetup, condense, norm_series, verify_condensation_laws
