"""Hybrid quasicrystal potentials: substitution sequences, tight-binding
transport simulation, and symbolic-dynamics diagnostics."""

from .analysis import RegimeLabel, RegimeThresholds, TransportFit, classify, fit_beta, last_decade
from .dynamics import (
    LatticeModel,
    MomentSeries,
    WaveState,
    apply_hamiltonian,
    default_dt,
    evolve,
    exact_evolve,
    second_moment,
    wavefront_safe,
)
from .errors import (
    InsufficientDataError,
    IntegratorInstabilityError,
    NumericalError,
    ResourceLimitError,
    ValidationError,
)
from .experiment import ExperimentConfig, RunSpec, execute_run, preset, run_sweep
from .hybrid import (
    DEFAULT_VALUE_MAP,
    HybridPotential,
    hybridize,
    letters_to_values,
    value_letters,
    value_set,
)
from .sources import (
    BUILTINS,
    ExplicitSource,
    PeriodicSource,
    SequenceSource,
    SubstitutionSource,
    resolve_source,
)
from .substitution import (
    FCC,
    PD,
    PF,
    PF_LITERAL_MAP,
    RS,
    TM,
    SpectralInfo,
    Substitution,
    SubstitutionMatrix,
    apply_literal_map,
    primitivity_power,
    product_substitution,
    spectral_info,
)
from .symbolic import (
    ComplexityProfile,
    IndependenceVerdict,
    OccurrenceSet,
    Witness,
    boshernitzan_score,
    complexity,
    complexity_profile,
    epsilon_periods,
    factor_statistics,
    max_gap,
    multiplicative_independence,
    occurrences,
    pair_factor_occurs,
    witness_search,
)

__version__ = "0.1.0"
