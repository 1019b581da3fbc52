"""Entanglement and CHSH nonlocality of two-qubit states.

The main entry points are :func:`concurrence`, :func:`nonlocality`,
:func:`shared_conditions` and :func:`certify`.
"""

from .bound import QMembership, bound_value, certify, check_pure_relation, vw_matrix
from .entanglement import concurrence, concurrence_pure, entanglement_report, eof, spin_flip
from .nonlocality import (
    ChshOperator,
    ChshSetting,
    NonlocalityReport,
    brute_force_nonlocality,
    chsh_value,
    nonlocality,
    optimal_chsh,
)
from .qmat import DEFAULT_TOLERANCES, SignedSvd3, Tolerances, hermitian_eigensystem, svd3
from .shared import SharedOperatorVerdict, probe_no_triple, shared_conditions, theorem2_pair
from .states import (
    BlochDecomposition,
    apply_local_unitary,
    bloch_decompose,
    gamma_state,
    lambda_state,
    omega_state,
    phi_state,
    projector,
    random_density,
    random_pure,
    random_unitary,
    rotation_from_unitary,
    unitary_from_rotation,
    validate_density,
    vw_state,
)

__version__ = "0.1.0"
