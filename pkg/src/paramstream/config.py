"""Tunable constants: oracle desk bounds and the grid-minor constant."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DeskBounds:
    """Largest inputs each exact oracle accepts before refusing.

    Bounds on graph oracles count vertices of the part the solver actually
    searches (after the documented safe reductions, per connected component
    where the oracle works component-wise).
    """

    vc_vertices: int = 40
    longest_path_vertices: int = 24
    fvs_vertices: int = 24
    treewidth_vertices: int = 18
    domset_vertices: int = 24
    sat_brute_variables: int = 24


DESK_BOUNDS = DeskBounds()

# Multiplier on (g^-1(k+1))^10 * n in the generic minor-bidimensional
# threshold.  Any value >= 1 keeps the meta-algorithm correct because the
# stored-graph branch is decided exactly.
DEFAULT_TAU = 1

# Edge budgets above this do not fit a signed 64-bit counter; threshold
# algorithms refuse them.
MAX_EDGE_BUDGET = (1 << 63) - 1
