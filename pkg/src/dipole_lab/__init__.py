"""Oscillating two-point-charge dipole: k-space mode amplitudes, field
reconstruction, emission observables, and single-mode quantization checks."""

from .conjugacy import CanonicalPair, canonical_pair, hamilton_residuals
from .errors import (
    AliasingRisk,
    ConfigParseError,
    DimensionTooSmall,
    DipoleLabError,
    PreEmissionTime,
    QuadratureNotConverged,
    RootNotBracketed,
    SingularPoint,
    SuperluminalSpec,
    UnsupportedConfig,
)
from .fields import (
    FieldSample,
    electric_field,
    magnetic_field,
    retarded_potential_oracle,
    sample_fields,
    scalar_potential,
    scalar_potential_direct,
    small_dipole_fields,
    vector_potential,
)
from .identities import (
    IdentityReport,
    sinc_integral_with_tail,
    verify_coulomb_recovery,
    verify_field_consistency,
    verify_odd_angular_integral,
    verify_vector_identities,
)
from .kspace import (
    DEFAULT_QUADRATURE,
    KGrid,
    KPoint,
    ModeAmplitude,
    ModeAmplitudeGrid,
    QuadratureSettings,
    amplitude_table_csv,
    build_amplitude_grid,
    check_separation,
    mode_amplitude,
    scalar_amplitude,
    separation_static_term,
    vector_amplitude,
    velocity_amplitude,
)
from .observables import (
    AngularSpectrum,
    EmissionSample,
    angular_density,
    hamiltonian_exact,
    hamiltonian_standard,
    invert_angular_cdf,
    momentum_exact,
    sample_emission_direction,
    sample_emission_directions,
)
from .quantum import (
    LadderOps,
    build_ladder,
    commutator_check,
    commutator_float_residue,
    heisenberg_amplitude,
    mode_hamiltonian,
    mode_momentum,
    stimulated_hamiltonian,
)
from .trajectory import (
    DipoleSpec,
    Envelope,
    PhysicalConstants,
    charge_positions,
    charge_velocities,
    cm_trajectory,
    constants_for,
    displacement_scalar,
    lab_positions,
    lab_velocities,
    max_charge_speed,
    step_theta0,
    velocity_scalar,
)

__version__ = "0.1.0"
