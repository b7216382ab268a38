"""
Non-archimedean dynamics: Lubin logarithms, commutants, fixed points,
lift data and semi-conjugacies.
"""
from .lubin import (
    LogLimit,
    StableNoninvertible,
    commutant,
    level_slopes,
    lubin_limit,
    lubin_log,
    root_valuation_profile,
)
from .fixed_point import FixedPoint, check_phi_iterate_seed, normalize_fixed_point
from .lift_datum import (
    LiftDatum,
    LiftDatumReport,
    condensed_datum,
    cyclotomic_datum,
    lubin_tate_datum,
    verify_lift_datum,
)
from .semiconj import DualIsogeny, SemiConjReport, SemiConjTriple, dual_isogeny, solve_semiconj, verify_semiconj
