"""Exact exponent calculus for weighted Strichartz estimates."""
from .appendix import AppendixReport, appendix_interp_verify, largest_passing_eps
from .classes import (
    PerturbedExponents,
    ac_membership,
    ad_membership,
    beta_exponent,
    inhomogeneous_admissible,
    localized_conditions,
    necessary_conditions,
    perturb_exponents,
    scaling_gap,
    solved_sigma,
    criterion_conditions,
)
from .core import (
    Condition,
    ExponentConfig,
    Membership,
    Relation,
    Status,
    Verdict,
    as_fraction,
)
from .region import Region, RegionPiece, region_polygon
from .sweep import SweepReport, implication_sweep, random_configs
from .wellposedness import (
    InfeasibleExponents,
    WPExponents,
    default_gammat0,
    feasible_parameters,
    wellposedness_exponents,
)
from .whitney import WhitneySquare, coverage_defect, whitney_decompose

__all__ = [
    "AppendixReport", "Condition", "ExponentConfig", "InfeasibleExponents", "Membership",
    "PerturbedExponents", "Region", "RegionPiece", "Relation", "Status", "SweepReport",
    "Verdict", "WPExponents", "WhitneySquare", "ac_membership", "ad_membership",
    "appendix_interp_verify", "as_fraction", "beta_exponent", "coverage_defect",
    "default_gammat0", "feasible_parameters", "implication_sweep", "inhomogeneous_admissible",
    "largest_passing_eps", "localized_conditions", "necessary_conditions", "perturb_exponents",
    "random_configs", "region_polygon", "scaling_gap", "solved_sigma", "criterion_conditions",
    "wellposedness_exponents", "whitney_decompose",
]
