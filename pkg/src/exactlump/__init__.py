"""Exact linear lumping of LTI systems and its effect on controllability and observability."""

from .compartmental import (
    ChainSpec,
    Reaction,
    ReactionNetwork,
    chain_eigenvectors,
    chain_spectrum,
    chain_to_network,
    gen_chain,
    network_to_system,
    standard_two_row_m,
)
from .errors import (
    DecompositionError,
    IllConditionedError,
    InvalidInputError,
    LumpingError,
    NotControllableError,
    NotExactlyLumpableError,
    NotSymmetricError,
    SingularMatrixError,
)
from .linalg import RankResult, rank, right_pseudo_inverse, spectral_radius_symmetric, symmetric_eigen
from .lti import (
    AnalysisReport,
    LtiSystem,
    controllability_matrix,
    dual,
    is_controllable,
    is_observable,
    observability_matrix,
)
from .lumping import (
    KineticCheck,
    LumpedSystem,
    LumpingScheme,
    PreservationReport,
    build_m_from_eigenvectors,
    dual_lumped,
    is_kinetic_lumping,
    lump_system,
    lumped_a,
    make_scheme,
    verify_preservation,
)
from .mmatrix import Classification, MMatrixReport, classify, decompose, decompose_with_s, is_compartmental
from .simulation import ControlSignal, Trajectory, lumped_trajectory_check, simulate, steer

__version__ = "0.1.0"
