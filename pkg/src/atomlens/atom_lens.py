"""Pulsed dipole-lens focusing of a collimated atomic beam.

A short light pulse (duration tau, much shorter than the inverse recoil
frequency) imprints the phase -U(rho) tau / hbar on the matter wave, where

    U = hbar Gamma^2 I / (8 Delta I_s)

is the dipole potential. For the thin-rim focal profiles of radially /
azimuthally polarized light the imprinted phase is A J0^2(k rho) /
A J1^2(k rho) with the dimensionless pulse strength ("field area")

    A = tau k^2 C1^2 Gamma^2 / (16 eta I_s Delta) ,

negative for red detuning. Downstream of the pulse the wavefunction in the
focal region is the Hankel-type aperture integral

    Psi(r) ~ Int_0^a J0(2 pi rho r / (lambda_D f))
                 exp(-i pi rho^2 z / (lambda_D f^2))
                 exp(i Phi(rho)) rho drho ,

    Phi(rho) = pi rho^2 / (lambda_D f) - (imprinted phase) ,

with lambda_D = h / (m V1) the beam's de Broglie wavelength and a the
aperture radius. Choosing f so that the quadratic part of Phi cancels
gives the lens focal lengths

    red (J0^2):  f = lambda^2 / (2 pi |A| lambda_D)
    blue (J1^2): f = lambda^2 / (pi |A| lambda_D) .

Focal lengths are reported positive; the lens polarity is carried by the
detuning sign. The stationary-phase prefactor of the propagator is dropped
throughout and densities are normalized to unit peak, so only shapes and
widths are meaningful.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .bessel import bessel_j0, bessel_j1
from .constants import HBAR, PLANCK, VACUUM_IMPEDANCE
from .quadrature import DEFAULT_QUADRATURE, QuadratureError, integrate_complex

__all__ = [
    "AtomSpecies", "LensPulse", "LensSetup", "PotentialProfile", "WaveField",
    "SpotMetrics", "ValidityDiagnostic",
    "de_broglie", "recoil_frequency", "dipole_potential", "field_area",
    "aberration_phase", "aberration_curvature", "focal_length",
    "wavefunction_focal", "atomic_density", "spot_metrics", "validity_check",
]


@dataclass(frozen=True)
class AtomSpecies:
    """Atom and transition data: mass [kg], transition wavelength [m],
    natural linewidth [rad/s], saturation intensity [W/m^2]."""

    mass: float
    transition_wavelength: float
    linewidth: float
    saturation_intensity: float
    name: str = ""

    def __post_init__(self):
        for attr in ("mass", "transition_wavelength", "linewidth",
                     "saturation_intensity"):
            if not (getattr(self, attr) > 0.0):
                raise ValueError(f"{attr} must be strictly positive")

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.transition_wavelength


@dataclass(frozen=True)
class LensPulse:
    """Lens pulse: duration tau [s], signed detuning Delta [rad/s], and
    either the field constant C1 or a directly supplied field area A.

    A supplied field area must carry the sign of 1/Delta, as the formula
    would produce (red detuning -> A < 0). ``field_area=0`` describes the
    pulse-off control case.
    """

    duration: float
    detuning: float
    amplitude_constant: float = None
    field_area: float = None

    def __post_init__(self):
        if not (self.duration > 0.0):
            raise ValueError("duration must be positive")
        if self.detuning == 0.0:
            raise ValueError("detuning must be nonzero")
        if self.amplitude_constant is None and self.field_area is None:
            raise ValueError("supply either amplitude_constant or field_area")
        if self.field_area is not None and self.field_area != 0.0:
            if np.sign(self.field_area) != np.sign(self.detuning):
                raise ValueError("field_area sign must match the detuning sign")


def de_broglie(species, beam_velocity) -> float:
    """de Broglie wavelength h / (m V) of the beam [m]."""
    if not (beam_velocity > 0.0):
        raise ValueError("beam velocity must be positive")
    return PLANCK / (species.mass * beam_velocity)


def recoil_frequency(species) -> float:
    """Recoil frequency hbar k^2 / (2 m) of the transition [rad/s]."""
    k = species.wavenumber
    return HBAR * k * k / (2.0 * species.mass)


def dipole_potential(intensity, species, detuning) -> float:
    """Dipole potential U = hbar Gamma^2 I / (8 Delta I_s) [J].

    Negative (attractive toward high intensity) for red detuning. Warns
    when |Delta| < 10 Gamma, where the two-level far-detuned form stops
    being trustworthy.
    """
    if detuning == 0.0:
        raise ValueError("detuning must be nonzero")
    if abs(detuning) < 10.0 * species.linewidth:
        warnings.warn("dipole potential evaluated at |Delta| < 10 Gamma",
                      stacklevel=2)
    g = species.linewidth
    return HBAR * g * g * intensity / (8.0 * detuning * species.saturation_intensity)


def field_area(pulse, species) -> float:
    """Field area A = tau k^2 C1^2 Gamma^2 / (16 eta I_s Delta) from explicit
    pulse parameters. Rejects pulses specified by a direct field area."""
    if pulse.amplitude_constant is None:
        raise ValueError("pulse carries a direct field_area; nothing to compute")
    k = species.wavenumber
    g = species.linewidth
    return (pulse.duration * k * k * pulse.amplitude_constant ** 2 * g * g
            / (16.0 * VACUUM_IMPEDANCE * species.saturation_intensity
               * pulse.detuning))


@dataclass(frozen=True)
class PotentialProfile:
    """Radial shape of the imprinted lens phase.

    kind "red_j0sq" / "blue_j1sq": the closed thin-rim profiles, scaled by
    the field area; ``wavelength`` is the light wavelength fixing k.
    kind "ideal": zero aberration function (perfect-lens oracle).
    kind "custom": phase U(rho) tau / hbar interpolated cubically from a
    radial intensity table (the field area is not used).
    """

    kind: str
    wavelength: float = None
    phase_fn: object = None

    _KINDS = ("red_j0sq", "blue_j1sq", "ideal", "custom")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind in ("red_j0sq", "blue_j1sq") and not (
                self.wavelength and self.wavelength > 0.0):
            raise ValueError("Bessel profiles require a positive light wavelength")
        if self.kind == "custom" and not callable(self.phase_fn):
            raise ValueError("custom profile requires a phase function")

    @classmethod
    def red(cls, wavelength):
        return cls(kind="red_j0sq", wavelength=wavelength)

    @classmethod
    def blue(cls, wavelength):
        return cls(kind="blue_j1sq", wavelength=wavelength)

    @classmethod
    def ideal(cls):
        return cls(kind="ideal")

    @classmethod
    def from_intensity_table(cls, radius, intensity, species, pulse):
        """Build a custom profile from sampled intensity I(rho) [W/m^2]."""
        radius = np.asarray(radius, dtype=float)
        intensity = np.asarray(intensity, dtype=float)
        if radius.ndim != 1 or radius.shape != intensity.shape or radius.size < 4:
            raise ValueError("intensity table needs matching 1-d arrays, >= 4 samples")
        shift = np.array([
            dipole_potential(i, species, pulse.detuning) * pulse.duration / HBAR
            for i in intensity])
        spline = CubicSpline(radius, shift)
        return cls(kind="custom", phase_fn=spline)

    @property
    def wavenumber_light(self) -> float:
        return 2.0 * np.pi / self.wavelength

    @property
    def lens_mode(self) -> str:
        if self.kind == "red_j0sq":
            return "red"
        if self.kind == "blue_j1sq":
            return "blue"
        raise ValueError(f"profile kind {self.kind!r} has no closed-form focal length")


def aberration_phase(rho, f, lambda_db, area, profile):
    """Total aperture phase Phi(rho) [rad], Fresnel quadratic included."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0):
        raise ValueError("rho must be >= 0")
    if not (f > 0.0):
        raise ValueError("f must be positive")
    fresnel = np.pi * rho * rho / (lambda_db * f)
    if profile.kind == "red_j0sq":
        pot = area * bessel_j0(profile.wavenumber_light * rho) ** 2
    elif profile.kind == "blue_j1sq":
        pot = area * bessel_j1(profile.wavenumber_light * rho) ** 2
    elif profile.kind == "ideal":
        out = np.zeros_like(rho)
        return float(out) if out.ndim == 0 else out
    else:
        pot = profile.phase_fn(rho)
    out = fresnel - pot
    return float(out) if out.ndim == 0 else out


def aberration_curvature(f, wavelength, lambda_db, area, mode) -> float:
    """d^2 Phi / drho^2 at rho = 0 for the closed Bessel profiles.

    Vanishes exactly when f equals the lens focal length of the matching
    mode (the defining property of the focal length).
    """
    k = 2.0 * np.pi / wavelength
    if mode == "red":
        return 2.0 * np.pi / (lambda_db * f) + area * k * k
    if mode == "blue":
        return 2.0 * np.pi / (lambda_db * f) - 0.5 * area * k * k
    raise ValueError(f"unknown mode {mode!r}")


def focal_length(area, wavelength, lambda_db, mode) -> float:
    """Lens focal length from the field area; positive by convention.

    red:  lambda^2 / (2 pi |A| lambda_D)
    blue: lambda^2 / (pi |A| lambda_D)
    """
    if area == 0.0:
        raise ValueError("field area is zero: no lens")
    if mode == "red":
        return wavelength ** 2 / (2.0 * np.pi * abs(area) * lambda_db)
    if mode == "blue":
        return wavelength ** 2 / (np.pi * abs(area) * lambda_db)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class LensSetup:
    """Species + pulse + aperture geometry of one atom-lens scenario."""

    species: AtomSpecies
    pulse: LensPulse
    aperture_radius: float
    beam_velocity: float
    profile: PotentialProfile

    def __post_init__(self):
        if not (self.aperture_radius > 0.0):
            raise ValueError("aperture_radius must be positive")
        if not (self.beam_velocity > 0.0):
            raise ValueError("beam_velocity must be positive")

    def de_broglie_wavelength(self) -> float:
        return de_broglie(self.species, self.beam_velocity)

    def resolved_field_area(self) -> float:
        if self.pulse.field_area is not None:
            return self.pulse.field_area
        return field_area(self.pulse, self.species)

    def focal_length(self) -> float:
        return focal_length(self.resolved_field_area(),
                            self.species.transition_wavelength,
                            self.de_broglie_wavelength(),
                            self.profile.lens_mode)


@dataclass
class WaveField:
    """Focal-region wavefunction on a radial grid.

    ``psi`` carries an arbitrary overall constant; ``density`` is |psi|^2
    normalized to unit peak. ``failures`` lists (index, message) for radial
    samples whose quadrature did not converge (NaN entries).
    """

    r: np.ndarray
    z: float
    psi: np.ndarray
    density: np.ndarray
    peak_radius: float
    error: np.ndarray
    lambda_db: float
    focal_length: float
    field_area: float
    aperture_radius: float
    failures: list = field(default_factory=list)


def atomic_density(wave, r=None):
    """Unit-peak density |psi|^2 and the radius of its peak.

    Accepts a WaveField or a raw complex sample array (then ``r`` locates
    the peak; without it the peak index is returned).
    """
    if isinstance(wave, WaveField):
        psi, r = wave.psi, wave.r
    else:
        psi = np.asarray(wave)
    mag = np.abs(psi) ** 2
    peak = np.nanmax(mag) if np.any(np.isnan(mag)) else mag.max()
    if not (peak > 0.0):
        raise ValueError("cannot normalize an all-zero wavefunction")
    density = mag / peak
    idx = int(np.nanargmax(mag))
    location = float(np.asarray(r, dtype=float)[idx]) if r is not None else idx
    return density, location


def wavefunction_focal(setup, f, r, z=0.0, quad=DEFAULT_QUADRATURE, threads=1):
    """Propagate the lensed beam to the plane at axial offset z near focus.

    Evaluates the aperture integral for every radius in ``r`` (a pure map,
    optionally threaded; the result does not depend on ``threads``) and
    returns a WaveField with the unit-peak density attached.
    """
    if not (f > 0.0):
        raise ValueError("f must be positive")
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("r must be a non-empty 1-d array")
    lam_db = setup.de_broglie_wavelength()
    area = setup.resolved_field_area()
    a = setup.aperture_radius
    defocus = np.pi * z / (lam_db * f * f)

    def sample(i):
        ri = r[i]
        hankel = 2.0 * np.pi * ri / (lam_db * f)

        # integrated in units of the aperture radius (rho = a u) with the
        # arbitrary a^2 prefactor dropped, so the integrand is O(1) and the
        # absolute tolerance floor keeps its meaning
        def integrand(u):
            rho = a * u
            phase = aberration_phase(rho, f, lam_db, area, setup.profile) \
                - defocus * rho * rho
            return bessel_j0(hankel * rho) * np.exp(1j * phase) * u

        try:
            value, err = integrate_complex(integrand, 0.0, 1.0, quad)
            return i, value, err, None
        except QuadratureError as exc:
            return i, np.nan + 0.0j, np.nan, str(exc)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(sample, range(r.size)))
    else:
        results = [sample(i) for i in range(r.size)]

    psi = np.empty(r.size, dtype=complex)
    err = np.empty(r.size)
    failures = []
    for i, value, e, message in results:
        psi[i] = value
        err[i] = e
        if message is not None:
            failures.append((i, message))
    density, peak_radius = atomic_density(psi, r)
    return WaveField(r=r, z=z, psi=psi, density=density, peak_radius=peak_radius,
                     error=err, lambda_db=lam_db, focal_length=f, field_area=area,
                     aperture_radius=a, failures=failures)


@dataclass(frozen=True)
class SpotMetrics:
    """Width and sidelobe summary of a radial density profile."""

    fwhm: float
    peak_radius: float
    first_sidelobe_ratio: float


def spot_metrics(r, density) -> SpotMetrics:
    """Measure FWHM, peak radius and strongest secondary maximum.

    The FWHM is found by linear interpolation between the samples
    bracketing the half-maximum crossings; a peak on the axis is treated
    as the center of a symmetric profile. Raises when the profile has no
    unique peak, the peak is a single unresolved sample, or a half-maximum
    crossing is missing.
    """
    r = np.asarray(r, dtype=float)
    d = np.asarray(density, dtype=float)
    if r.shape != d.shape or r.ndim != 1 or r.size < 3:
        raise ValueError("need matching 1-d arrays with >= 3 samples")
    if not np.all(np.isfinite(d)):
        raise ValueError("density contains non-finite samples")
    peak = d.max()
    peak_idx = np.flatnonzero(d == peak)
    if peak_idx.size > 1:
        raise ValueError("ambiguous profile: multiple equal maxima")
    i = int(peak_idx[0])
    half = 0.5 * peak
    if np.count_nonzero(d > half) < 2:
        raise ValueError("peak not resolved: only one sample above half maximum")

    def cross_right(start):
        j = start
        while j + 1 < d.size and d[j + 1] >= half:
            j += 1
        if j + 1 >= d.size:
            raise ValueError("no half-maximum crossing right of the peak")
        return r[j] + (half - d[j]) * (r[j + 1] - r[j]) / (d[j + 1] - d[j])

    def cross_left(start):
        j = start
        while j - 1 >= 0 and d[j - 1] >= half:
            j -= 1
        if j - 1 < 0:
            raise ValueError("no half-maximum crossing left of the peak")
        return r[j] + (half - d[j]) * (r[j - 1] - r[j]) / (d[j - 1] - d[j])

    right = cross_right(i)
    if i == 0:
        fwhm = 2.0 * (right - r[0])
    else:
        fwhm = right - cross_left(i)

    interior = np.flatnonzero((d[1:-1] >= d[:-2]) & (d[1:-1] >= d[2:])) + 1
    lobes = [j for j in interior if j != i]
    side = max((d[j] for j in lobes), default=0.0) / peak
    return SpotMetrics(fwhm=float(fwhm), peak_radius=float(r[i]),
                       first_sidelobe_ratio=float(side))


@dataclass(frozen=True)
class ValidityDiagnostic:
    """One model-validity condition: computed ratio against its threshold."""

    name: str
    ratio: float
    threshold: float
    passed: bool
    description: str


def validity_check(setup, f, max_r_observation):
    """Check the assumptions behind the thin-lens aperture integral.

    Returns diagnostics (never raises): far detuning |Delta|/Gamma >= 10,
    impulsive pulse tau * omega_recoil <= 0.1, small lens angle a/f <= 0.2,
    and observation window r_max/f <= 1e-2.
    """
    delta_ratio = abs(setup.pulse.detuning) / setup.species.linewidth
    pulse_ratio = setup.pulse.duration * recoil_frequency(setup.species)
    angle_ratio = setup.aperture_radius / f
    window_ratio = max_r_observation / f
    return [
        ValidityDiagnostic("detuning", delta_ratio, 10.0, delta_ratio >= 10.0,
                           "|detuning| / linewidth (>= threshold)"),
        ValidityDiagnostic("pulse_duration", pulse_ratio, 0.1, pulse_ratio <= 0.1,
                           "duration * recoil frequency (<= threshold)"),
        ValidityDiagnostic("aperture_angle", angle_ratio, 0.2, angle_ratio <= 0.2,
                           "aperture radius / focal length (<= threshold)"),
        ValidityDiagnostic("observation_window", window_ratio, 1e-2,
                           window_ratio <= 1e-2,
                           "max observation radius / focal length (<= threshold)"),
    ]
