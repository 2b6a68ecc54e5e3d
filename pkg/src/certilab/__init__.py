"""certilab: local certification on paths, cycles, trees and caterpillars.

Provers assign per-vertex certificates; verifiers accept or reject from
bounded-radius views.  The package ships the model, the translation of path
verifiers to unary automata with their eventually periodic length sets,
certificate walk-graphs for cycles, tree parsing/gluing machinery, the
number-theoretic substrate, and a catalog of concrete schemes.
"""

from .topology import (Topology, build_caterpillar, build_cycle, build_path,
                       build_tree)
from .views import View, view_at
from .certify import (CertAssignment, LocalVerifier, PathTables, Scheme,
                      check_completeness, exists_accepting_assignment,
                      exists_accepting_backtracking, run_verification,
                      soundness_sweep)
from .automata import (EventuallyPeriodicSet, PathNFA, cert_to_nfa,
                       cert_to_nfa_labeled, determinize_lasso,
                       enumerate_tiny_verifiers, eps_equal_on_window,
                       eps_membership, lower_bound_oracle,
                       min_cert_size_for_length, nfa_complement,
                       nfa_intersection, nfa_union, periodicity_falsifier)
from .walks import (CertWalkGraph, build_cert_graph, closed_walk_exists,
                    elementary_cycle_lengths, representable, scc_periods,
                    verify_bezout_window, walk_realizability_check)
from .trees import (RootedTree, TreeParsing, caterpillar_to_path, glue, parse,
                    path_to_caterpillar, tree_accepted, trees_isomorphic)
from . import arith, schemes

__version__ = "0.1.0"
