"""Systemic-risk analytics for cross-border bank ownership networks."""

from .attribution import (AttributionReport, CountryAttribution, KsResult,
                          attribute_all, ks_two_sample)
from .capital import (CapitalSchedule, ChargeRow, build_schedule,
                      holling_charge)
from .community import CommunityAssignment, detect_communities, modularity
from .contagion import (NO_SPREAD, NoSpread, SirParams, SirTrajectory,
                        StepSizeError, ThresholdResult, epidemic_threshold,
                        integrate_sir, is_no_spread, simulate_sir_mc)
from .graph import (CountryGraph, DegreeView, OwnershipRecord, Projection,
                    SelfLoopError, StrengthRankings, UnknownCountryError,
                    build_graph, degree_distribution, degree_view,
                    delete_node, largest_component, strength_rankings)
from .shapley import (CoalitionGame, SampledShapley, shapley_exact,
                      shapley_sampled)
from .synth import SyntheticSpec, country_names, generate_records

__version__ = "0.1.0"

__all__ = [
    "AttributionReport", "CountryAttribution", "KsResult", "attribute_all",
    "ks_two_sample",
    "CapitalSchedule", "ChargeRow", "build_schedule", "holling_charge",
    "CommunityAssignment", "detect_communities", "modularity",
    "NO_SPREAD", "NoSpread", "SirParams", "SirTrajectory", "StepSizeError",
    "ThresholdResult", "epidemic_threshold", "integrate_sir", "is_no_spread",
    "simulate_sir_mc",
    "CountryGraph", "DegreeView", "OwnershipRecord", "Projection",
    "SelfLoopError", "StrengthRankings", "UnknownCountryError", "build_graph",
    "degree_distribution", "degree_view", "delete_node", "largest_component",
    "strength_rankings",
    "CoalitionGame", "SampledShapley", "shapley_exact", "shapley_sampled",
    "SyntheticSpec", "country_names", "generate_records",
    "__version__",
]
