"""Exact topology of Stirling complexes over labeled trees.

Build the cubical complex Str(T, S, n) for a labeled tree T and a family S
of disjoint subtrees, compute its homology exactly over prime fields, take
integer Smith normal forms, and cross-check every count against the closed
formulas.  See the verify module / the ``stirling-complexes`` CLI for the
full instance-level check suite.
"""

from .counting import (
    cell_count,
    cell_count_partial,
    cover_count,
    euler_formula,
    expected_sphere_count,
    f_closed,
    f_recursive,
    f_surjection_form,
    stirling2,
    surjections,
)
from .complexes import (
    DEFAULT_MAX_CELLS,
    Cell,
    CubicalComplex,
    Edge,
    LastCoordinateReport,
    Vertex,
    boundary,
    decompose_last_coordinate,
    enumerate_complex,
    f_vector,
    is_member,
    support,
    vertex_valencies,
)
from .errors import (
    DomainError,
    FamilyError,
    InternalCheckError,
    ResourceCapError,
    TreeError,
)
from .homology import (
    DEFAULT_PRIMES,
    DEFAULT_SNF_MAX_COLS,
    BettiProfile,
    SNFDiagnostics,
    SparseMatrixModP,
    betti,
    boundary_matrix,
    connected_components,
    elementary_divisors,
    is_prime,
    rank,
    smith_normal_form,
    verify_chain_axiom,
)
from .trees import (
    LabeledTree,
    SubtreeFamily,
    enumerate_trees,
    parse_family_spec,
    parse_inline_tree,
    parse_tree,
    prufer_decode,
    prufer_encode,
    sample_trees,
    serialize_tree,
    validate_family,
)
from .verify import (
    VerificationReport,
    check_instance,
    payload_json,
    run_sweep,
    standard_instances,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # trees
    "LabeledTree",
    "SubtreeFamily",
    "parse_tree",
    "parse_inline_tree",
    "serialize_tree",
    "enumerate_trees",
    "sample_trees",
    "prufer_decode",
    "prufer_encode",
    "validate_family",
    "parse_family_spec",
    # counting
    "stirling2",
    "surjections",
    "f_closed",
    "f_surjection_form",
    "f_recursive",
    "euler_formula",
    "cell_count",
    "cell_count_partial",
    "cover_count",
    "expected_sphere_count",
    # complexes
    "Vertex",
    "Edge",
    "Cell",
    "CubicalComplex",
    "LastCoordinateReport",
    "support",
    "is_member",
    "boundary",
    "enumerate_complex",
    "f_vector",
    "vertex_valencies",
    "decompose_last_coordinate",
    "DEFAULT_MAX_CELLS",
    # homology
    "SparseMatrixModP",
    "BettiProfile",
    "SNFDiagnostics",
    "boundary_matrix",
    "rank",
    "betti",
    "connected_components",
    "smith_normal_form",
    "elementary_divisors",
    "is_prime",
    "verify_chain_axiom",
    "DEFAULT_PRIMES",
    "DEFAULT_SNF_MAX_COLS",
    # verify
    "VerificationReport",
    "check_instance",
    "run_sweep",
    "standard_instances",
    "payload_json",
    # errors
    "TreeError",
    "FamilyError",
    "DomainError",
    "ResourceCapError",
    "InternalCheckError",
]
