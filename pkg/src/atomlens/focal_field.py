"""Focal-region electric fields of high-aperture systems (Debye picture).

The field near focus is the plane-wave superposition over the geometric
convergence cone,

    E = -(i C / lambda) Int Int P(theta, phi) B(theta, phi)
            exp(i k kappa) sin(theta) dtheta dphi ,

    kappa = z cos(theta) + r_t sin(theta) cos(phi - phi_c) ,

taken over theta in [alpha_inner, alpha] and phi in [0, 2 pi). P is the
unit-ray polarization obtained by rotating the pupil vector (a, b, 0) into
the meridional plane and refracting it, B the pupil amplitude (apodization).

For radially and azimuthally polarized pupils the phi integral reduces to
Bessel kernels and the field needs only one-dimensional integrals:

    radial:    Ex =  (2 C pi / lambda) I1 cos(phi_c)
               Ey =  (2 C pi / lambda) I1 sin(phi_c)
               Ez =  (2 C pi i / lambda) I0
    azimuthal: Ex =  (2 C pi / lambda) I1a sin(phi_c)
               Ey = -(2 C pi / lambda) I1a cos(phi_c)
               Ez =  0

with

    I0  = Int B sin^2(theta) J0(k r_t sin theta) exp(i k z cos theta) dtheta
    I1  = Int B cos(theta) sin(theta) J1(k r_t sin theta) exp(i k z cos theta) dtheta
    I1a = Int B sin(theta) J1(k r_t sin theta) exp(i k z cos theta) dtheta .

The sign of Ez is fixed by direct reduction of the double integral, so the
general and specialized paths agree component by component.

Observation points are stored by transverse radius r_t and axial offset z;
the integrands depend on nothing else.
"""

import inspect
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bessel import bessel_j0, bessel_j1
from .constants import VACUUM_IMPEDANCE
from .quadrature import DEFAULT_QUADRATURE, QuadratureError, integrate_complex, \
    integrate_complex_2d

__all__ = [
    "PupilSpec", "FocalPoint", "FieldSample", "FieldMap",
    "polarization_vector", "field_radial", "field_azimuthal", "field_general",
    "field_at", "intensity", "annular_limit_intensity", "scan_field",
    "tabulated_apodization", "tabulated_polarization",
]

POLARIZATIONS = ("radial", "azimuthal", "linear_x", "custom")


def tabulated_apodization(theta, values):
    """Build B(theta) from uniform samples by linear interpolation."""
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values, dtype=float)
    if theta.ndim != 1 or theta.shape != values.shape or theta.size < 2:
        raise ValueError("apodization table needs matching 1-d theta/value arrays")
    if np.any(np.diff(theta) <= 0):
        raise ValueError("apodization table theta axis must be increasing")
    return lambda t: np.interp(t, theta, values)


def _bilinear(theta, phi, table):
    def fn(t, p):
        t = np.asarray(t, dtype=float)
        p = np.asarray(p, dtype=float)
        it = np.clip(np.searchsorted(theta, t) - 1, 0, theta.size - 2)
        ip = np.clip(np.searchsorted(phi, p) - 1, 0, phi.size - 2)
        wt = (t - theta[it]) / (theta[it + 1] - theta[it])
        wp = (p - phi[ip]) / (phi[ip + 1] - phi[ip])
        wt = np.clip(wt, 0.0, 1.0)
        wp = np.clip(wp, 0.0, 1.0)
        return ((1 - wt) * (1 - wp) * table[it, ip]
                + wt * (1 - wp) * table[it + 1, ip]
                + (1 - wt) * wp * table[it, ip + 1]
                + wt * wp * table[it + 1, ip + 1])
    return fn


def tabulated_polarization(theta, phi, a_table, b_table):
    """Build custom pupil components a(theta, phi), b(theta, phi) from
    uniformly sampled tables, interpolated bilinearly."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    a_table = np.asarray(a_table, dtype=float)
    b_table = np.asarray(b_table, dtype=float)
    expected = (theta.size, phi.size)
    if a_table.shape != expected or b_table.shape != expected:
        raise ValueError("polarization tables must be (n_theta, n_phi)")
    return _bilinear(theta, phi, a_table), _bilinear(theta, phi, b_table)


@dataclass(frozen=True)
class PupilSpec:
    """Complete description of the focusing pupil.

    wavelength: vacuum wavelength in meters.
    alpha: convergence semiangle in radians, 0 < alpha <= pi/2.
    alpha_inner: blocked inner semiangle (annular aperture), < alpha.
    polarization: "radial", "azimuthal", "linear_x" or "custom".
    apodization: "aplanatic" (sqrt(cos theta)), "uniform", or a callable of
        theta (or of theta and phi, accepted on the general path).
    amplitude: the overall field constant C (arbitrary units).
    pol_a, pol_b: pupil-plane polarization components for "custom" mode,
        callables of (theta, phi); see also ``tabulated_polarization``.
    """

    wavelength: float
    alpha: float
    alpha_inner: float = 0.0
    polarization: str = "radial"
    apodization: object = "aplanatic"
    amplitude: float = 1.0
    pol_a: object = None
    pol_b: object = None

    def __post_init__(self):
        if not (self.wavelength > 0.0):
            raise ValueError("wavelength must be positive")
        if not (0.0 < self.alpha <= np.pi / 2):
            raise ValueError("alpha must lie in (0, pi/2]")
        if not (0.0 <= self.alpha_inner < self.alpha):
            raise ValueError("alpha_inner must lie in [0, alpha)")
        if self.polarization not in POLARIZATIONS:
            raise ValueError(f"unknown polarization {self.polarization!r}")
        if self.polarization == "custom":
            if not (callable(self.pol_a) and callable(self.pol_b)):
                raise ValueError("custom polarization requires callables pol_a, pol_b")
        if isinstance(self.apodization, str):
            if self.apodization not in ("aplanatic", "uniform"):
                raise ValueError(f"unknown apodization {self.apodization!r}")
        elif not callable(self.apodization):
            raise ValueError("apodization must be 'aplanatic', 'uniform' or callable")

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    def apodization_fn(self):
        """Return B as a callable of (theta, phi)."""
        if self.apodization == "aplanatic":
            return lambda t, p: np.sqrt(np.cos(t))
        if self.apodization == "uniform":
            return lambda t, p: np.ones_like(np.asarray(t, dtype=float))
        fn = self.apodization
        n_args = len([q for q in inspect.signature(fn).parameters.values()
                      if q.default is inspect.Parameter.empty
                      and q.kind in (q.POSITIONAL_ONLY, q.POSITIONAL_OR_KEYWORD)])
        if n_args == 1:
            return lambda t, p: fn(t)
        return fn

    def polarization_ab(self, theta, phi):
        """Pupil polarization components (a, b) for any mode, so that the
        built-in modes can be queried through the custom interface."""
        phi = np.asarray(phi, dtype=float)
        if self.polarization == "radial":
            return np.cos(phi), np.sin(phi)
        if self.polarization == "azimuthal":
            return np.sin(phi), -np.cos(phi)
        if self.polarization == "linear_x":
            one = np.ones_like(phi)
            return one, np.zeros_like(phi)
        return (np.asarray(self.pol_a(theta, phi), dtype=float),
                np.asarray(self.pol_b(theta, phi), dtype=float))


@dataclass(frozen=True)
class FocalPoint:
    """Observation point: transverse radius, azimuth, axial offset from focus."""

    r_t: float
    phi_c: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if self.r_t < 0.0:
            raise ValueError("r_t must be >= 0")


@dataclass(frozen=True)
class FieldSample:
    """Complex field components at one point plus the quadrature error bound."""

    ex: complex
    ey: complex
    ez: complex
    error: float = 0.0


def _pol_components(pupil, theta, phi):
    a, b = pupil.polarization_ab(theta, phi)
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    px = a * (ct * cp * cp + sp * sp) + b * (ct - 1.0) * sp * cp
    py = a * (ct - 1.0) * sp * cp + b * (ct * sp * sp + cp * cp)
    pz = -a * st * cp - b * st * sp
    return px, py, pz


def polarization_vector(theta, phi, pupil):
    """Unit-ray polarization P(theta, phi) behind the lens for this pupil."""
    if not (0.0 <= theta <= np.pi / 2):
        raise ValueError("theta must lie in [0, pi/2]")
    px, py, pz = _pol_components(pupil, float(theta), float(phi))
    return np.array([float(px), float(py), float(pz)])


def field_radial(point, pupil, quad=DEFAULT_QUADRATURE):
    """Focal field of a radially polarized pupil via the reduced integrals."""
    if pupil.polarization != "radial":
        raise ValueError("field_radial requires a radial pupil")
    k = pupil.wavenumber
    bfn = pupil.apodization_fn()
    u = k * point.r_t
    kz = k * point.z

    def f0(t):
        st = np.sin(t)
        return bfn(t, 0.0) * st * st * bessel_j0(u * st) * np.exp(1j * kz * np.cos(t))

    def f1(t):
        st, ct = np.sin(t), np.cos(t)
        return bfn(t, 0.0) * ct * st * bessel_j1(u * st) * np.exp(1j * kz * ct)

    i0, e0 = integrate_complex(f0, pupil.alpha_inner, pupil.alpha, quad)
    i1, e1 = integrate_complex(f1, pupil.alpha_inner, pupil.alpha, quad)
    pref = 2.0 * pupil.amplitude * np.pi / pupil.wavelength
    return FieldSample(
        ex=pref * i1 * np.cos(point.phi_c),
        ey=pref * i1 * np.sin(point.phi_c),
        ez=1j * pref * i0,
        error=pref * (e0 + e1),
    )


def field_azimuthal(point, pupil, quad=DEFAULT_QUADRATURE):
    """Focal field of an azimuthally polarized pupil; Ez is identically zero."""
    if pupil.polarization != "azimuthal":
        raise ValueError("field_azimuthal requires an azimuthal pupil")
    k = pupil.wavenumber
    bfn = pupil.apodization_fn()
    u = k * point.r_t
    kz = k * point.z

    def f1(t):
        st = np.sin(t)
        return bfn(t, 0.0) * st * bessel_j1(u * st) * np.exp(1j * kz * np.cos(t))

    i1, e1 = integrate_complex(f1, pupil.alpha_inner, pupil.alpha, quad)
    pref = 2.0 * pupil.amplitude * np.pi / pupil.wavelength
    return FieldSample(
        ex=pref * i1 * np.sin(point.phi_c),
        ey=-pref * i1 * np.cos(point.phi_c),
        ez=0.0 + 0.0j,
        error=pref * e1,
    )


def field_general(point, pupil, quad=DEFAULT_QUADRATURE):
    """Focal field by the full two-dimensional pupil integral.

    Works for any pupil, including custom (a, b) and phi-dependent B, and
    agrees with the reduced radial/azimuthal paths within quadrature
    tolerances.
    """
    k = pupil.wavenumber
    bfn = pupil.apodization_fn()
    pref = -1j * pupil.amplitude / pupil.wavelength

    def component(which):
        def f(t, p):
            px, py, pz = _pol_components(pupil, t, p)
            comp = (px, py, pz)[which]
            kappa = point.z * np.cos(t) + point.r_t * np.sin(t) * np.cos(p - point.phi_c)
            return comp * bfn(t, p) * np.exp(1j * k * kappa) * np.sin(t)
        return integrate_complex_2d(
            f, (pupil.alpha_inner, pupil.alpha), (0.0, 2.0 * np.pi), quad)

    (ex, eex), (ey, eey), (ez, eez) = component(0), component(1), component(2)
    return FieldSample(ex=pref * ex, ey=pref * ey, ez=pref * ez,
                       error=abs(pref) * (eex + eey + eez))


def field_at(point, pupil, quad=DEFAULT_QUADRATURE):
    """Evaluate with the cheapest applicable path for this pupil."""
    if pupil.polarization == "radial":
        return field_radial(point, pupil, quad)
    if pupil.polarization == "azimuthal":
        return field_azimuthal(point, pupil, quad)
    return field_general(point, pupil, quad)


def intensity(sample) -> float:
    """Time-averaged intensity (|Ex|^2 + |Ey|^2 + |Ez|^2) / (2 eta)."""
    return (abs(sample.ex) ** 2 + abs(sample.ey) ** 2 + abs(sample.ez) ** 2) \
        / (2.0 * VACUUM_IMPEDANCE)


def annular_limit_intensity(r_t, wavelength, c1, mode, form="exact"):
    """Closed-form focal-plane intensity of a thin-rim annulus at alpha -> 90 deg.

    radial:    I = (2/eta) (C1 pi / lambda)^2 J0^2(k r_t)
    azimuthal: I = (2 pi^2 C1^2 / (lambda^2 eta)) J1^2(k r_t)

    ``form="parabola"`` returns the leading near-axis expansion instead
    (1 - (k r_t)^2 / 2 for radial, (k r_t)^2 / 4 for azimuthal, times the
    same prefactor); it is only meaningful for k r_t << 1.
    """
    r_t = np.asarray(r_t, dtype=float)
    k = 2.0 * np.pi / wavelength
    pref = 2.0 * (c1 * np.pi / wavelength) ** 2 / VACUUM_IMPEDANCE
    if form not in ("exact", "parabola"):
        raise ValueError(f"unknown form {form!r}")
    x = k * r_t
    if mode == "radial":
        shape = bessel_j0(x) ** 2 if form == "exact" else 1.0 - 0.5 * x * x
    elif mode == "azimuthal":
        shape = bessel_j1(x) ** 2 if form == "exact" else 0.25 * x * x
    else:
        raise ValueError(f"unknown annular mode {mode!r}")
    out = np.asarray(pref * shape)
    return float(out) if out.ndim == 0 else out


@dataclass
class FieldMap:
    """Field samples on an (r_t, phi_c, z) grid.

    ``failures`` lists (i, j, k, message) for grid nodes whose quadrature
    did not converge; those nodes hold NaN.
    """

    r_t: np.ndarray
    phi_c: np.ndarray
    z: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    ez: np.ndarray
    error: np.ndarray
    failures: list = field(default_factory=list)

    def sample(self, i, j, k) -> FieldSample:
        return FieldSample(self.ex[i, j, k], self.ey[i, j, k],
                           self.ez[i, j, k], float(self.error[i, j, k]))


def _check_axis(name, values):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} axis must be a non-empty 1-d array")
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} axis must be strictly increasing")
    return arr


def scan_field(r_t, phi_c, z, pupil, quad=DEFAULT_QUADRATURE, threads=1):
    """Evaluate the focal field on the tensor grid r_t x phi_c x z.

    The evaluation is a pure map over grid nodes: results are written by
    index, so the output is independent of ``threads``. Per-node quadrature
    failures are collected in ``FieldMap.failures`` instead of aborting the
    scan.
    """
    r_t = _check_axis("r_t", r_t)
    phi_c = _check_axis("phi_c", phi_c)
    z = _check_axis("z", z)
    shape = (r_t.size, phi_c.size, z.size)
    ex = np.full(shape, np.nan, dtype=complex)
    ey = np.full(shape, np.nan, dtype=complex)
    ez = np.full(shape, np.nan, dtype=complex)
    err = np.full(shape, np.nan)
    failures = []

    def run_node(idx):
        i, j, k = idx
        point = FocalPoint(r_t=float(r_t[i]), phi_c=float(phi_c[j]), z=float(z[k]))
        try:
            return idx, field_at(point, pupil, quad), None
        except QuadratureError as exc:
            return idx, None, str(exc)

    indices = [(i, j, k)
               for i in range(shape[0]) for j in range(shape[1]) for k in range(shape[2])]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_node, indices))
    else:
        results = [run_node(idx) for idx in indices]

    for idx, sample, message in results:
        if sample is None:
            failures.append((*idx, message))
            continue
        i, j, k = idx
        ex[i, j, k] = sample.ex
        ey[i, j, k] = sample.ey
        ez[i, j, k] = sample.ez
        err[i, j, k] = sample.error
    return FieldMap(r_t=r_t, phi_c=phi_c, z=z, ex=ex, ey=ey, ez=ez,
                    error=err, failures=failures)
