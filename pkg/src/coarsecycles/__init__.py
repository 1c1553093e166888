"""Chain algebra and coarse cycle structure on finite windows of infinite graphs."""

from .chains import Chain, Z, Z2, defect, is_cycle
from .config import RunConfig, load_config
from .cyclespace import (
    FilteredCycleBasis,
    enumerate_simple_circuits,
    full_cycle_basis,
    greedy_circuit_basis,
    large_circuit_profile,
    membership,
)
from .ends import EndPartition, EndTree, end_defining_tree, end_partition, push_to_tree_z2
from .expansion import (
    ProbeResult,
    cheeger,
    h0_expansion_witness,
    h1_expansion_probe,
    pure_filter,
    triad_report,
)
from .flows import decompose_flow, dominates, extend_ray, finite_extension, lift_z2_to_z
from .rips import RipsComplex, build_rips, circuits_from_2chain, triangulate_circuit
from .trees import (
    BipBasis,
    TreeSpec,
    bips_to_cycle,
    build_tree,
    comb_counterexample_check,
    construct_bips,
    tree_coefficients,
    verify_bip_basis,
)
from .windows import FamilySpec, GraphWindow, build_window, window_from_edges

__version__ = "0.1.0"

__all__ = [
    "BipBasis",
    "Chain",
    "EndPartition",
    "EndTree",
    "FamilySpec",
    "FilteredCycleBasis",
    "GraphWindow",
    "ProbeResult",
    "RipsComplex",
    "RunConfig",
    "TreeSpec",
    "Z",
    "Z2",
    "bips_to_cycle",
    "build_rips",
    "build_tree",
    "build_window",
    "cheeger",
    "circuits_from_2chain",
    "comb_counterexample_check",
    "construct_bips",
    "decompose_flow",
    "defect",
    "dominates",
    "end_defining_tree",
    "end_partition",
    "enumerate_simple_circuits",
    "extend_ray",
    "finite_extension",
    "full_cycle_basis",
    "greedy_circuit_basis",
    "h0_expansion_witness",
    "h1_expansion_probe",
    "is_cycle",
    "large_circuit_profile",
    "lift_z2_to_z",
    "load_config",
    "membership",
    "pure_filter",
    "push_to_tree_z2",
    "tree_coefficients",
    "triad_report",
    "triangulate_circuit",
    "verify_bip_basis",
    "window_from_edges",
]
