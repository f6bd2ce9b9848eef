"""Parameterized streaming graph algorithms with exact offline oracles."""

from .multipass_vc import VCOutcome, vc_branching, vc_iterative_compression
from .oracles import (
    CnfInstance,
    DeskBoundExceeded,
    StoredGraph,
    domset_min,
    fvs_min,
    girth,
    longest_path_length,
    sat2_solve,
    satd_brute,
    treewidth_exact,
    vc_min,
)
from .sparse_recovery import Overflow, SparseRecoverySketch
from .stream import (
    EdgeUpdate,
    Model,
    ModelError,
    Op,
    PassCounter,
    ReplayableStream,
    SpaceLedger,
    StreamError,
    insert_only,
    open_stream,
    read_stream,
    write_stream,
)
from .threshold import (
    bidimensional_decide,
    k_fvs_decide,
    k_path_decide,
    k_treewidth_decide,
    run_edge_budget,
)

__all__ = [
    "CnfInstance",
    "DeskBoundExceeded",
    "EdgeUpdate",
    "Model",
    "ModelError",
    "Op",
    "Overflow",
    "PassCounter",
    "ReplayableStream",
    "SpaceLedger",
    "SparseRecoverySketch",
    "StoredGraph",
    "StreamError",
    "VCOutcome",
    "bidimensional_decide",
    "domset_min",
    "fvs_min",
    "girth",
    "insert_only",
    "k_fvs_decide",
    "k_path_decide",
    "k_treewidth_decide",
    "longest_path_length",
    "open_stream",
    "read_stream",
    "run_edge_budget",
    "sat2_solve",
    "satd_brute",
    "treewidth_exact",
    "vc_branching",
    "vc_iterative_compression",
    "vc_min",
    "write_stream",
]
