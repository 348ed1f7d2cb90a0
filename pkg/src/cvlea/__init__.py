"""Noisy Gaussian channels and local entanglement annihilation, in the
Gaussian (covariance-matrix) and Fock (Kraus-operator) pictures."""

from .errors import (
    CVLEAError,
    CutoffTooSmall,
    DegenerateState,
    DimensionMismatch,
    DomainError,
    InvalidChannel,
    NonConvergence,
)
from .gaussian import (
    ChannelParams,
    apply_channel,
    corollary2_annihilates,
    corollary3_annihilates,
    is_entanglement_breaking,
    is_nlea_gaussian,
    is_physical,
    make_channel,
    simon_separable,
    symplectic_eigenvalues,
    tmsv_covariance,
)
from .fock import (
    FockDensity,
    FockState,
    apply_channel_pair,
    channel_kraus,
    coherent_state,
    negativity,
    psi_gamma_state,
    tmsv_state,
)
from .witness import (
    corollary4_threshold,
    detect_entanglement,
    lambda0,
    prop2_region,
    witness_average_closed_form,
    witness_average_numeric,
)

__version__ = "0.1.0"
