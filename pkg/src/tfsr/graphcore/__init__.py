"""Weighted triangle-free graphs, structural predicates and named constructions."""
from .boundedness import (
    WitnessChain,
    WitnessError,
    ZeroA,
    boundedness_bound,
    boundedness_check,
    boundedness_witness,
)
from .catalog import (
    CATALOG,
    ParameterOutOfRange,
    catalog,
    clebsch,
    cycle,
    cycle5,
    g_h,
    gewirtz,
    higman_sims,
    hoffman_singleton,
    kneser,
    kneser_parameters,
    m22,
    petersen,
    srg_parameters,
)
from .graph import (
    CompleteGraph,
    GraphError,
    WeightedGraph,
    a_value,
    blow_up,
    degree_measure,
    e,
    is_complete,
    is_diameter_two,
    is_regular,
    is_triangle_free,
    is_twin_free,
    mask_members,
    minimizing_pairs,
    non_adjacent_pairs,
    p3n,
    regular_density,
    rho,
    twin_classes,
    twin_reduce,
)
from .graph6 import Graph6Error, parse_graph6, read_graph, to_graph6, write_graph

__all__ = [name for name in dir() if not name.startswith("_")]
