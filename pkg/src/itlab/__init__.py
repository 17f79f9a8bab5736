"""Quantum wavepackets, classical trajectories and the imaging theorem in one dimension.

Atomic units throughout (hbar = 1); masses are always passed explicitly.
"""
from .classical import (
    ActionRecord,
    ForceField,
    LaunchRecord,
    TrajectorySolution,
    TransitionZoneEstimate,
    accumulate_action,
    action_between,
    energy,
    initial_momentum_from_action,
    integrate_trajectory,
    launch_jacobian,
    shoot_for_momentum,
    transition_zone,
    van_vleck_jacobian,
)
from .convergence import (
    ConvergenceReport,
    MomentumPicture,
    it_error_scan,
    momentum_picture_scan,
    relative_l_inf,
)
from .core import (
    Grid,
    MomentumSpectrum,
    UnitSystem,
    Wavepacket,
    from_momentum,
    make_grid,
    norm,
    to_momentum,
)
from .density_matrix import (
    DensityMatrixSample,
    extract_frequency,
    offdiagonal_frequency,
    rho_element,
    time_average_offdiagonal,
)
from .errors import (
    AccuracyWarning,
    AliasingError,
    BoundaryError,
    CausticError,
    ConfigError,
    ConvergenceError,
    ExtrapolationError,
    IntegrationError,
    ItlabError,
    NoTrajectoryError,
    NumericalError,
    PreAsymptoticWarning,
    PropagationError,
    UndefinedRatioError,
    ValidationError,
)
from .exact import (
    GaussianSpec,
    PropagationPlan,
    forced_exact,
    free_exact,
    gaussian_initial,
    splitstep_propagate,
)
from .interferometer import (
    FringeProfile,
    GratingSpec,
    InterferometerGeometry,
    check_geometry,
    fringe_intensity,
    fringe_profile,
    grating_momentum_wf,
    path_phase_difference,
    two_path_superposition,
)
from .semiclassical import (
    DensityRatio,
    ItPrediction,
    TransportReport,
    forced_it_amplitude,
    free_it_amplitude,
    inverse_it_density,
    it_density_ratio,
    it_wavefunction,
    probability_transport_check,
    semiclassical_propagator,
)

__version__ = "0.1.0"
