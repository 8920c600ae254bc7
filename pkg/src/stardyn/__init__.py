"""Induced dynamics on hyperspaces of stars and intervals.

Exact geodesic and Hausdorff geometry on k-armed stars, homeomorphisms built
from monotone edge maps, symbolic coding of wandering orbits, and separated /
spanning orbit counting with growth-rate fits. The `lab` CLI runs seeded
verification scenarios on top of the library.
"""

from .errors import ConfigError, CoverageError, DomainError, InvariantError
from .spaces import StarPoint, StarSpace, canonicalize, distance
from .maps import (EdgeMap, PiecewiseLinearMap, PowerMap, StarHomeo,
                   WanderingLattice, apply, apply_inverse, edge_map_from_config,
                   is_wandering, iterate, star_orbit_values, wandering_lattice)
from .hyperspace import (Arc, ArcUnion, FinitePointSet, StarPiece, boundary,
                         classify_C2, contains, endpoints, finite_point_set,
                         hausdorff, induced_apply, make_Y_element,
                         point_to_set, random_element)
from .symbolic import (SymbolicFamily, SymbolWindow, WordSet, code_set,
                       code_window, complexity_enumerated, covering_windows,
                       cylinder_join_count, entropy_from_complexity, shift,
                       truncate, words_enumerated, words_sampled)
from .growth import (EXPONENTIAL, POLYNOMIAL, GrowthFit, fit_count_table,
                     fit_growth)
from .entropy import (DynSystem, dyn_distance, estimate_entropy,
                      greedy_separated, greedy_spanning, hyper_system,
                      point_system, power_system, product_power_check,
                      product_system)
from .lattice import (ball_kill, count_grid, float_chain, gap_table,
                      greedy_count_1d, greedy_count_product,
                      greedy_count_tuples, triangle_candidates,
                      tuple_distance_matrix)
from .lab import (SCENARIOS, RunResult, list_scenarios, run_scenario,
                  selftest, write_run)

__version__ = "0.1.0"

__all__ = [
    "Arc", "ArcUnion", "ConfigError", "CoverageError", "DomainError",
    "DynSystem", "EXPONENTIAL", "EdgeMap", "FinitePointSet", "GrowthFit",
    "InvariantError", "POLYNOMIAL", "PiecewiseLinearMap", "PowerMap",
    "RunResult", "SCENARIOS", "StarHomeo", "StarPiece", "StarPoint",
    "StarSpace", "SymbolWindow", "SymbolicFamily", "WanderingLattice",
    "WordSet", "apply", "apply_inverse", "ball_kill", "boundary",
    "canonicalize", "classify_C2", "code_set", "code_window",
    "complexity_enumerated", "contains", "count_grid", "covering_windows",
    "cylinder_join_count", "distance", "dyn_distance", "edge_map_from_config",
    "endpoints", "entropy_from_complexity", "estimate_entropy",
    "finite_point_set", "fit_count_table", "fit_growth", "float_chain",
    "gap_table", "greedy_count_1d", "greedy_count_product",
    "greedy_count_tuples", "greedy_separated", "greedy_spanning", "hausdorff",
    "hyper_system", "induced_apply", "is_wandering", "iterate",
    "list_scenarios", "make_Y_element", "point_system", "point_to_set",
    "power_system",
    "product_power_check", "product_system", "random_element", "run_scenario",
    "selftest", "shift", "star_orbit_values", "triangle_candidates",
    "truncate", "tuple_distance_matrix", "wandering_lattice", "words_enumerated",
    "words_sampled", "write_run",
]
