"""latgate: exact lattice automorphism gates and their multipartite entanglement.

Highly symmetric Euclidean lattices (Z^n, D4, E8, BW16, D12+, Leech) are
built in exact rational arithmetic, their automorphism groups computed as
orthogonal gates acting on the basis, and the states encoded by gate rows
quantified with concurrence/tangle, Schmidt rank and partial-transpose
criteria.
"""

from .linalg import IntMatrix, LinalgError, RationalMatrix
from .lattices import (
    CATALOG_NAMES,
    Lattice,
    LatticeError,
    LinearCode,
    binary_golay_code,
    catalog,
    construction_a,
    construction_b,
    extended_hamming_code,
    is_even,
    is_unimodular,
    lattice_from_basis,
    leech_lattice,
    reed_muller_code,
    ternary_golay_code,
)
from .shortvec import (
    EnumerationError,
    ShortVectorSet,
    brute_force_short_vectors,
    enumerate_short_vectors,
    kissing_number,
    minimum,
)
from .autgrp import (
    AutGroupError,
    AutGroupResult,
    IntegralAutomorphism,
    OrthogonalGate,
    SearchBudget,
    SearchBudgetExceeded,
    automorphism_group,
    group_order_check,
    integral_action,
    is_automorphism,
    load_generators,
    natural_action,
)
from .entangle import (
    DensityMatrix,
    EntangleError,
    FactorShape,
    MultipartiteState,
    TangleReport,
    analyze_gate,
    analyze_state,
    common_eigenbasis_check,
    concurrence_spectrum,
    density_matrix,
    factor_out,
    partial_trace,
    partial_transpose,
    pauli_observable,
    ppt_spectrum,
    pure_two_tangle,
    reshape,
    residual_three_tangle,
    schmidt_rank,
    spin_flip,
    state_from_row,
    three_tangle,
    two_tangle,
)
from .numerics import NumericsError, SymmetricSpectrum, psd_sqrt, sym_eigen

__version__ = "0.1.0"
