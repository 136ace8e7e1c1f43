"""Evolving-network simulation, birth-and-death degree distributions and mean-field theory."""

from .analysis import ComparisonReport, FitResult, average_runs, compare, fit_exponent
from .bdp import (
    ProbabilityVector,
    RateModel,
    SolverConfig,
    accumulate,
    bdp_step,
    degree_distribution,
    direct_sum_reference,
    non_isolated_estimate,
    rates_ab,
    rates_evolving,
    solve,
)
from .distribution import DegreeDistribution
from .graph import EvolvingGraph, make_rng, new_complete, new_isolated
from .meanfield import solve_ab, solve_evolving
from .models import AbParams, EvolveParams, run_ab, run_evolving
