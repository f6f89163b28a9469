"""Exact and approximate transversals and matchings of ball hypergraphs."""

from .approx import (PLANAR, CoverCertificate, DensityProfile, caro_wei_independent_set,
                     constants, transversal_sample_size, linear_cover, near_linear_transversal,
                     round_fractional_matching, transversal_by_sampling)
from .balls import (Ball, BallSystem, all_balls, intersection_graph, make_ball, median_vertex,
                    minimalize, packing_hypergraph, random_balls)
from .errors import (BallCoverError, BudgetError, DensityWitnessError, EmptyError, InputError,
                     InternalError, NoPathError, PreconditionError)
from .graph import Graph, gen_broom_counterexample, gen_family, lex_min_shortest_path
from .lp import (FractionalSolution, exact_nu, exact_tau, solve_nu_star, solve_tau_star,
                 vc_dimension)
from .minors import MinorModel, minor_from_connectors, minor_from_medians, verify_minor_model
from .sparsify import (MultiHypergraph, enumerate_small_packing_edges, sparsify_derandomized,
                       sparsify_random)

__version__ = "0.1.0"

__all__ = [
    "PLANAR", "CoverCertificate", "DensityProfile", "caro_wei_independent_set", "constants",
    "transversal_sample_size", "linear_cover", "near_linear_transversal", "round_fractional_matching",
    "transversal_by_sampling",
    "Ball", "BallSystem", "all_balls", "intersection_graph", "make_ball", "median_vertex",
    "minimalize", "packing_hypergraph", "random_balls",
    "BallCoverError", "BudgetError", "DensityWitnessError", "EmptyError", "InputError",
    "InternalError", "NoPathError", "PreconditionError",
    "Graph", "gen_broom_counterexample", "gen_family", "lex_min_shortest_path",
    "FractionalSolution", "exact_nu", "exact_tau", "solve_nu_star", "solve_tau_star",
    "vc_dimension",
    "MinorModel", "minor_from_connectors", "minor_from_medians", "verify_minor_model",
    "MultiHypergraph", "enumerate_small_packing_edges", "sparsify_derandomized", "sparsify_random",
]
