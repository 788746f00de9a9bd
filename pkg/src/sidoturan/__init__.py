"""Sidorenko gaps of r-uniform hypergraphs and randomised Turan extraction."""

__version__ = "0.1.0"

from .hypergraph import (
    BudgetExceeded,
    Hypergraph,
    HypergraphError,
    are_isomorphic,
    automorphism_count,
    canonical_form,
    is_r_partite,
    parse_hypergraph,
    r_density,
    serialize_hypergraph,
)
from .constructions import (
    WeightedHypergraph,
    complete,
    expansion,
    loose_cycle,
    mix_with_constant,
    random_hypergraph,
    shadow_weighting,
    single_edge,
    tensor_power,
    tensor_product,
)
from .homomorphism import copy_count, density, has_copy, hom_count, shadow_expansion_count, weighted_hom_count
from .witnesses import behrend_set, greedy_partial_steiner, rigidity_check, rs_triangle_system, validate_witness_properties
from .sidorenko import bound_calculator, gap, mixed_witness_certify, predicted_curve, witness_search
from .turan import choose_tensor_exponent, exact_ex, extract_f_free, run_experiment
from .families import parse_family
