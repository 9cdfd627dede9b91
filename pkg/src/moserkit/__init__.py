"""Moser sets, kernels and Kemperman-type sumset bounds on finite vertex-transitive graphs."""
from .digraph import (
    Digraph, GraphError, VertexSet, boundary, exterior, image, induced_subgraph, neg_boundary,
    preimage, reflexive_closure,
)
from .groups import (
    FiniteGroup, GroupError, GroupSubset, cayley_graph, inverse_set, left_translate, make_group,
    minkowski_product,
)
from .kernel_graph import KernelGraph, build_kernel_graph, check_omega_lemma, mainomega_bound
from .mader import CycleSystem, mader_cycles, verify_cycle_system
from .moser import (
    Kernel, Molecule, MoserInstance, MuCertificate, all_molecules, check_kernel_lemmas,
    is_moser_set, kernel, mu_brute, mu_flow,
)
from .transitivity import TransitivityCertificate, certify_transitivity

__version__ = "0.1.0"
