"""Achievable rate regions for a two-transmitter channel with a cognitive relay link."""
from .scenario import (DpcCoefficients, DpcMode, GaussianScenario, PowerAllocation, ScenarioError,
                       Strategy, Verdict, figure_preset, load_scenario, validate_allocation)
from .rate_terms import (InvalidAllocation, NegativeThetaArgument, RateTerms, terms,
                         terms_classical, terms_lookahead, terms_no_delay, theta)
from .region import (EmptyRegion, Frontier, GridSpec, RegionPolytope, SplitRatePolytope,
                     convex_closure, corollary_region, lp_project, region_dominates,
                     sweep_frontier)

__version__ = "0.1.0"

__all__ = [
    "DpcCoefficients", "DpcMode", "GaussianScenario", "PowerAllocation", "ScenarioError", "Strategy",
    "Verdict", "figure_preset", "load_scenario", "validate_allocation",
    "InvalidAllocation", "NegativeThetaArgument", "RateTerms", "terms", "terms_classical",
    "terms_lookahead", "terms_no_delay", "theta",
    "EmptyRegion", "Frontier", "GridSpec", "RegionPolytope", "SplitRatePolytope", "convex_closure",
    "corollary_region", "lp_project", "region_dominates", "sweep_frontier",
]
