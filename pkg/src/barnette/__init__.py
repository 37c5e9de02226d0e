"""Hamiltonian sets of vertices in a family of plane triangulations.

A hamiltonian set induces a tree and meets every face; its cut is a
Hamiltonian cycle of the dual cubic graph.
"""

__version__ = "0.1.0"

from .planar_core import PlaneTriangulation, parse_triangulation, format_triangulation, op_equivalent  # noqa: E402
from .family import check_family_membership  # noqa: E402
from .verifier import verify_hamiltonian_set  # noqa: E402
from .constructor import construct_hamiltonian_set  # noqa: E402
from .dualize import tree_to_dual_cycle  # noqa: E402

__all__ = [
    "PlaneTriangulation",
    "parse_triangulation",
    "format_triangulation",
    "op_equivalent",
    "check_family_membership",
    "verify_hamiltonian_set",
    "construct_hamiltonian_set",
    "tree_to_dual_cycle",
]
