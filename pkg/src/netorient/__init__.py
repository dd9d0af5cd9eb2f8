"""Orienting undirected and partly-directed binary phylogenetic networks."""
from .class_orient import (Budget, BudgetExceeded, ClassOrientation, RootableSet, c_orientation,
                           chain_reduce, is_tree_based_undirected, rootable_edges, rootable_edges_exhaustive,
                           rootable_edges_fpt)
from .classes import (CLASS_TAGS, NAMED_CLASSES, NetworkClass, class_membership, find_base_tree, find_w_fence,
                      is_orchard, is_reticulation_visible, is_stack_free, is_tree_based, is_tree_child, is_valid)
from .generate import GeneratorConfig, InfeasibleConfig, generate_random_directed, random_undirected
from .network import (ROOT_ID, DegreeMap, DirectedNetwork, NetworkError, ParseError, PartlyDirectedNetwork,
                      UndirectedNetwork, edge, format_network, parse_network, parse_network_file, to_dot,
                      underlying_network)
from .orient import (DegreeCut, OrientationResult, RootedInstance, brute_force_orientations, find_degree_cut,
                     is_semi_directed, orient, orient_binary, orient_partly_directed, validate_degree_cut)
from .partly_directed import PartlyDirectedOrientation, partly_directed_c_orientation
from .structure import blob_decomposition, generator, graph_stats, is_orientable, reduce_pendant_subtrees
from .suite import SuiteReport, run_suite

__version__ = "0.1.0"
