"""atomlens: vectorial focal fields and pulsed dipole-lens atom focusing."""

from .atom_lens import (
    AtomSpecies, LensPulse, LensSetup, PotentialProfile, SpotMetrics,
    ValidityDiagnostic, WaveField, aberration_curvature, aberration_phase,
    atomic_density, de_broglie, dipole_potential, field_area, focal_length,
    recoil_frequency, spot_metrics, validity_check, wavefunction_focal,
)
from .bessel import bessel_j0, bessel_j1
from .constants import HBAR, PLANCK, VACUUM_IMPEDANCE
from .focal_field import (
    FieldMap, FieldSample, FocalPoint, PupilSpec, annular_limit_intensity,
    field_at, field_azimuthal, field_general, field_radial, intensity,
    polarization_vector, scan_field, tabulated_apodization,
    tabulated_polarization,
)
from .quadrature import (
    DEFAULT_QUADRATURE, QuadratureError, QuadratureSpec, integrate_complex,
    integrate_complex_2d,
)

__version__ = "0.1.0"

__all__ = [
    "AtomSpecies", "LensPulse", "LensSetup", "PotentialProfile", "SpotMetrics",
    "ValidityDiagnostic", "WaveField", "aberration_curvature", "aberration_phase",
    "atomic_density", "de_broglie", "dipole_potential", "field_area",
    "focal_length", "recoil_frequency", "spot_metrics", "validity_check",
    "wavefunction_focal",
    "bessel_j0", "bessel_j1",
    "HBAR", "PLANCK", "VACUUM_IMPEDANCE",
    "FieldMap", "FieldSample", "FocalPoint", "PupilSpec",
    "annular_limit_intensity", "field_at", "field_azimuthal", "field_general",
    "field_radial", "intensity", "polarization_vector", "scan_field",
    "tabulated_apodization", "tabulated_polarization",
    "DEFAULT_QUADRATURE", "QuadratureError", "QuadratureSpec",
    "integrate_complex", "integrate_complex_2d",
    "__version__",
]
