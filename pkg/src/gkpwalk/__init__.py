"""Exact simulation of random-walk preparation of approximate GKP states.

States are finite superpositions of equal-width displaced vacua; every
operation here (walk steps, coin post-selection, polarization optics, phase
space rotation, overlaps, Wigner functions) is evaluated in closed form on
that representation.
"""

from .analysis import (
    DensityCurve,
    EnvelopeFit,
    EquivalenceReport,
    GridSpec,
    WignerGrid,
    equivalence_report,
    fidelity,
    fit_envelope,
    quadrature_density,
    stabilizer_expectation,
    wigner_grid,
)
from .errors import (
    AsymmetricVacuumError,
    GkpWalkError,
    IncompatibleWidthError,
    InsufficientDataError,
    InvalidCoinError,
    InvalidParameterError,
    SchemaError,
    ZeroNormError,
)
from .optics import (
    OpticalElement,
    ProtocolTrace,
    apply_fourier_lens,
    apply_pbs_postselect,
    apply_pol_rotator,
    apply_slant_kick,
    run_sagnac_protocol,
)
from .phase_space import (
    CoherentSuperposition,
    GaussianTerm,
    PhasePoint,
    displace,
    displaced_vacuum,
    inner_product,
    labelled_gaussian,
    make_vacuum,
    merge_terms,
    norm,
    normalize,
    rotate,
    superpose,
    wavefunction_at,
)
from .targets import (
    GkpTargetSpec,
    TwoModeSuperposition,
    approx_gkp,
    grid_state_2d,
    ideal_comb_descriptor,
    logical_one_from_zero,
    rotated_target,
)
from .walk import (
    COIN_H,
    COIN_MINUS,
    COIN_PLUS,
    COIN_V,
    CoinState,
    HybridState,
    WalkConfig,
    WalkResult,
    binomial_state_direct,
    coin_project,
    gaussian_envelope_state,
    run_walk,
    walk_step,
)

__version__ = "0.1.0"
