"""gravnoise: a numerical laboratory for test particles and waves in a
stochastic gravitational-wave background.

The package generates seeded ensembles of harmonic-gauge vacuum plane
waves, evolves two-particle geodesic deviation under their curvature,
builds interval/action probabilities and the associated wavefunction,
integrates the modified Schrodinger equation (hbar -> 2 S0) with a
norm-conserving implicit scheme, measures the residuals of the classical
Hamilton-Jacobi + continuity system against the quantum potential, and
runs Monte Carlo double-slit experiments whose arm amplitudes are
modulated by the sampled metric.
"""

from .background import (
    BackgroundSpec,
    ModeEnsemble,
    PlaneWaveMode,
    evaluate_perturbation,
    generate_background,
    harmonic_gauge_residual,
    make_tt_mode,
    metric_at,
    mode_violations,
    vacuum_wave_residual,
)
from .config import ExperimentConfig, parse_config, serialize_config
from .deviation import (
    CurvatureSample,
    DeviationState,
    PhaseAccumulation,
    closed_form_deviation,
    curvature_at,
    integrate_deviation,
    oscillation_frequency,
    phase_accumulation,
)
from .doubleslit import (
    InterferenceResult,
    PathAmplitude,
    SlitExperiment,
    SlitGeometry,
    free_amplitude,
    fringe_visibility,
    monte_carlo_pattern,
    path_averaged_h,
    perturbed_path_amplitude,
    screen_intensity,
)
from .errors import (
    ConfigError,
    DecompositionError,
    GravNoiseError,
    LinearizationError,
    LinearizationWarning,
    NormalizationError,
    NumericalError,
    PrecisionError,
    UnstableRegimeError,
)
from .madelung import (
    DerivationGapReport,
    MadelungPair,
    continuity_residual,
    derivation_gap_report,
    hj_residual,
    madelung_decompose,
    quantum_potential,
    recompose,
)
from .probability import (
    AxiomReport,
    ProbabilityModel,
    action_probability,
    amplitude_prefactor,
    check_probability_axioms,
    interval_probability,
    normalize_components,
    wavefunction_from_action,
)
from .runner import RunManifest, run_experiment
from .schrodinger import (
    WaveFunctionGrid,
    evolve,
    free_spreading_width,
    gaussian_packet,
    harmonic_potential,
    packet_width,
    plane_wave,
    schrodinger_step,
)
from .seeding import substream_seed, substream_seeds
from .tensors import (
    C_LIGHT,
    SpacetimePoint,
    SymTensor4,
    interval_squared,
    minkowski,
)

__version__ = "0.1.0"
