"""Chain graphs, independent edge-set systems, recursive colourings and a
deterministic compression scheme for uncertain priors."""

from .bitsets import elements, to_mask
from .bounds import bound_table, lambert_w, log_star, p_r
from .chains import Chain, GraphFamilySpec, build_graph, make_chain, phi_drop_hom, rn_graph, vertices
from .coloring import (
    S1ColorMap,
    chromatic_exact,
    color_U_recursive,
    color_W_recursive,
    greedy_coloring,
    is_local_coloring,
    s1_coloring_from_u_coloring,
    u_coloring_from_s1_coloring,
)
from .compression import Code, Distribution, alice_chain, bob_chain, decode, delta_distance, encode, simulate
from .errors import ChainColorError
from .families import SetFamily, construct_2_independent, f_exact_small, is_r_independent, search_family
from .graph import AdjGraph, ColorMap, HomMap, is_proper
from .systems import (
    EdgeSetSystem,
    coloring_from_system,
    is_independent_system,
    lower_bound_coloring,
    partition_by_type,
    search_system,
    system_from_coloring,
    system_from_family,
)

__version__ = "0.1.0"
