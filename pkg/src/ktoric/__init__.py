"""Exact K-theory computations for symplectic toric manifolds.

A smooth compact toric manifold is given by a Delzant polytope
``{x : <a_i, x> <= b_i}``.  The package builds its K-theory presentation
``Z[x_1^±1..x_N^±1] / (I + J)``, checks it against the fixed-point (GKM)
description, and probes the Morse-theoretic structure of the Kirwan map
numerically.
"""
from .lattice import (
    IntMatrix,
    QuotientLattice,
    hermite_normal_form,
    kernel_basis,
    normal_form,
    quotient_lattice,
    smith_normal_form,
)
from .polytope import (
    DelzantPolytope,
    ValidationReport,
    minimal_nonfaces,
    validate_delzant,
)
from .ring import GroupRingElem, divisible_by_one_minus, euler_class, monomial
from .kirwan import (
    build_delzant_data,
    critical_values_Z,
    eliminate_J,
    flow_check_all,
    gradient_flow,
    kernel_generators,
    presentation,
)
from .gkm import (
    GKMGraph,
    build_gkm_graph,
    equivariant_rank_certificate,
    gamma_subring_contains,
    morse_basis,
    ordinary_k_rank,
    restrict_class,
    verify_presentation,
)
from .fixtures import FIXTURES, load_fixture

__version__ = "0.1.0"
