"""Tests for the Debye focal-field evaluation."""

import numpy as np
import pytest

from atomlens import (
    FocalPoint, FieldSample, PupilSpec, QuadratureError, QuadratureSpec,
    annular_limit_intensity, bessel_j0, field_azimuthal, field_general,
    field_radial, intensity, polarization_vector, scan_field,
    tabulated_apodization, tabulated_polarization,
)

LAM = 0.43e-6

QUAD_2D = QuadratureSpec(rel_tol=1e-8)


def radial_pupil(**kw):
    base = dict(wavelength=LAM, alpha=np.deg2rad(80.0), polarization="radial")
    base.update(kw)
    return PupilSpec(**base)


def azimuthal_pupil(**kw):
    base = dict(wavelength=LAM, alpha=np.deg2rad(30.0), polarization="azimuthal")
    base.update(kw)
    return PupilSpec(**base)


def rotation_oracle(theta, phi, a, b):
    """P = R^-1 C R P0 assembled from the explicit rotation matrices."""
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    rot = np.array([[cp, sp, 0.0], [-sp, cp, 0.0], [0.0, 0.0, 1.0]])
    lens = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    return rot.T @ lens @ rot @ np.array([a, b, 0.0])


class TestPupilSpec:
    @pytest.mark.parametrize("kwargs", [
        {"wavelength": 0.0}, {"alpha": 0.0}, {"alpha": 1.8},
        {"alpha_inner": -0.1}, {"alpha_inner": np.deg2rad(80.0)},
        {"polarization": "circular"}, {"apodization": "gauss"},
    ])
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            radial_pupil(**kwargs)

    def test_custom_requires_callables(self):
        with pytest.raises(ValueError):
            radial_pupil(polarization="custom")

    def test_builtin_modes_through_custom_interface(self):
        rng = np.random.default_rng(3)
        thetas = rng.uniform(0.0, np.pi / 2, 20)
        phis = rng.uniform(0.0, 2 * np.pi, 20)
        a, b = radial_pupil().polarization_ab(thetas, phis)
        assert np.allclose(a, np.cos(phis), atol=1e-15)
        assert np.allclose(b, np.sin(phis), atol=1e-15)
        a, b = azimuthal_pupil().polarization_ab(thetas, phis)
        assert np.allclose(a, np.sin(phis), atol=1e-15)
        assert np.allclose(b, -np.cos(phis), atol=1e-15)

    def test_focal_point_validation(self):
        with pytest.raises(ValueError):
            FocalPoint(r_t=-1e-9)


class TestPolarizationVector:
    def test_radial_matrix(self):
        rng = np.random.default_rng(11)
        pupil = radial_pupil()
        for theta, phi in zip(rng.uniform(0, np.pi / 2, 8), rng.uniform(0, 2 * np.pi, 8)):
            vec = polarization_vector(theta, phi, pupil)
            expected = np.array([np.cos(theta) * np.cos(phi),
                                 np.cos(theta) * np.sin(phi),
                                 -np.sin(theta)])
            assert np.allclose(vec, expected, atol=1e-14)

    def test_azimuthal_matrix(self):
        rng = np.random.default_rng(12)
        pupil = azimuthal_pupil()
        for theta, phi in zip(rng.uniform(0, np.pi / 2, 8), rng.uniform(0, 2 * np.pi, 8)):
            vec = polarization_vector(theta, phi, pupil)
            expected = np.array([np.sin(phi), -np.cos(phi), 0.0])
            assert np.allclose(vec, expected, atol=1e-14)

    def test_linear_on_axis(self):
        pupil = radial_pupil(polarization="linear_x")
        assert np.allclose(polarization_vector(0.0, 0.7, pupil), [1.0, 0.0, 0.0],
                           atol=1e-15)

    def test_custom_against_rotation_product(self):
        rng = np.random.default_rng(13)

        def a_fn(t, p):
            return np.cos(2 * p) + 0.3 * np.sin(t)

        def b_fn(t, p):
            return np.sin(p) * np.cos(t)

        pupil = radial_pupil(polarization="custom", pol_a=a_fn, pol_b=b_fn)
        for theta, phi in zip(rng.uniform(0, np.pi / 2, 10),
                              rng.uniform(0, 2 * np.pi, 10)):
            vec = polarization_vector(theta, phi, pupil)
            oracle = rotation_oracle(theta, phi, a_fn(theta, phi), b_fn(theta, phi))
            assert np.allclose(vec, oracle, atol=1e-13)

    def test_theta_domain(self):
        with pytest.raises(ValueError):
            polarization_vector(2.0, 0.0, radial_pupil())


class TestFieldRadial:
    def test_on_axis_transverse_null(self):
        for z in (0.0, 0.5 * LAM):
            sample = field_radial(FocalPoint(0.0, 0.3, z), radial_pupil())
            assert sample.ex == 0.0 and sample.ey == 0.0
            assert abs(sample.ez) > 0.0

    def test_azimuth_independence_of_ez(self):
        pupil = radial_pupil()
        point0 = FocalPoint(0.6 * LAM, 0.0, 0.0)
        ref = field_radial(point0, pupil).ez
        for phi_c in np.linspace(0.0, 2 * np.pi, 9):
            ez = field_radial(FocalPoint(0.6 * LAM, phi_c, 0.0), pupil).ez
            assert abs(ez - ref) <= 1e-10 * abs(ref)

    def test_component_rotation(self):
        pupil = radial_pupil()
        for r in (0.3 * LAM, 1.1 * LAM):
            ex = field_radial(FocalPoint(r, 0.0, 0.2 * LAM), pupil).ex
            ey = field_radial(FocalPoint(r, np.pi / 2, 0.2 * LAM), pupil).ey
            assert ex == pytest.approx(ey, abs=1e-12 * max(abs(ex), 1.0))

    def test_requires_radial_pupil(self):
        with pytest.raises(ValueError):
            field_radial(FocalPoint(0.0), azimuthal_pupil())

    def test_amplitude_scales_linearly(self):
        point = FocalPoint(0.4 * LAM, 0.1, 0.0)
        one = field_radial(point, radial_pupil(amplitude=1.0))
        three = field_radial(point, radial_pupil(amplitude=3.0))
        assert three.ez == pytest.approx(3.0 * one.ez, rel=1e-12)


class TestFieldAzimuthal:
    def test_longitudinal_exactly_zero(self):
        sample = field_azimuthal(FocalPoint(0.8 * LAM, 1.0, 0.3 * LAM),
                                 azimuthal_pupil())
        assert sample.ez == 0.0

    def test_on_axis_null(self):
        sample = field_azimuthal(FocalPoint(0.0, 0.0, 0.0), azimuthal_pupil())
        assert sample.ex == 0.0 and sample.ey == 0.0

    def test_total_intensity_azimuth_independent(self):
        pupil = azimuthal_pupil()
        vals = [intensity(field_azimuthal(FocalPoint(0.9 * LAM, p, 0.0), pupil))
                for p in np.linspace(0.0, 2 * np.pi, 7)]
        assert np.ptp(vals) <= 1e-10 * max(vals)

    def test_donut_structure(self):
        # dark on axis, single bright ring in the focal plane
        pupil = azimuthal_pupil()
        r = np.linspace(0.0, 2.0 * LAM, 60)
        prof = np.array([intensity(field_azimuthal(FocalPoint(ri), pupil))
                         for ri in r])
        assert prof[0] <= 1e-12 * prof.max()
        assert 0 < np.argmax(prof) < r.size - 1

    def test_requires_azimuthal_pupil(self):
        with pytest.raises(ValueError):
            field_azimuthal(FocalPoint(0.0), radial_pupil())


def relative_component_match(general, reduced, rtol):
    scale = max(abs(reduced.ex), abs(reduced.ey), abs(reduced.ez))
    for got, want in ((general.ex, reduced.ex), (general.ey, reduced.ey),
                      (general.ez, reduced.ez)):
        if abs(want) > 1e-9 * scale:
            assert abs(got - want) <= rtol * abs(want)
        else:
            assert abs(got - want) <= rtol * scale


class TestFieldGeneral:
    def test_reduces_to_radial(self):
        pupil = radial_pupil()
        for point in (FocalPoint(0.45 * LAM, 0.7, 0.0),
                      FocalPoint(1.2 * LAM, 2.1, 0.4 * LAM)):
            general = field_general(point, pupil, QUAD_2D)
            reduced = field_radial(point, pupil)
            relative_component_match(general, reduced, 1e-6)
            combined = 10.0 * (general.error + reduced.error)
            assert abs(general.ez - reduced.ez) <= combined

    def test_reduces_to_azimuthal(self):
        pupil = azimuthal_pupil()
        point = FocalPoint(0.9 * LAM, 1.3, 0.0)
        general = field_general(point, pupil, QUAD_2D)
        reduced = field_azimuthal(point, pupil)
        relative_component_match(general, reduced, 1e-6)

    def test_azimuthal_on_axis_vanishes(self):
        sample = field_general(FocalPoint(0.0, 0.0, 0.0), azimuthal_pupil(), QUAD_2D)
        scale = 2 * np.pi / LAM
        assert max(abs(sample.ex), abs(sample.ey), abs(sample.ez)) <= 1e-9 * scale

    def test_linear_on_axis_components(self):
        pupil = radial_pupil(polarization="linear_x")
        sample = field_general(FocalPoint(0.0, 0.0, 0.0), pupil, QUAD_2D)
        assert abs(sample.ex) > 0.0
        assert abs(sample.ey) <= 1e-8 * abs(sample.ex)
        assert abs(sample.ez) <= 1e-8 * abs(sample.ex)

    def test_linear_longitudinal_peak_fraction(self):
        # peak |Ez|^2 a loosely-quoted ~25% of peak |Ex|^2 at this aperture
        pupil = radial_pupil(polarization="linear_x")
        r = np.linspace(0.0, 1.2 * LAM, 25)
        ex2 = np.empty(r.size)
        ez2 = np.empty(r.size)
        for i, ri in enumerate(r):
            s = field_general(FocalPoint(ri, 0.0, 0.0), pupil, QUAD_2D)
            ex2[i] = abs(s.ex) ** 2
            ez2[i] = abs(s.ez) ** 2
        ratio = ez2.max() / ex2.max()
        assert 0.15 <= ratio <= 0.35

    def test_custom_callables_match_radial(self):
        pupil = radial_pupil(polarization="custom",
                             pol_a=lambda t, p: np.cos(p),
                             pol_b=lambda t, p: np.sin(p))
        point = FocalPoint(0.5 * LAM, 0.4, 0.0)
        general = field_general(point, pupil, QUAD_2D)
        reduced = field_radial(point, radial_pupil())
        relative_component_match(general, reduced, 1e-6)

    def test_linear_in_apodization(self):
        # E[B1 + B2] = E[B1] + E[B2]; exercises the phi-dependent B path
        def b1(t, p):
            return 1.0 + 0.0 * p

        def b2(t, p):
            return 0.3 * np.cos(p) ** 2 * np.sqrt(np.cos(t))

        def bsum(t, p):
            return b1(t, p) + b2(t, p)

        point = FocalPoint(0.35 * LAM, 0.9, 0.1 * LAM)
        fields = [field_general(point, radial_pupil(apodization=fn), QUAD_2D)
                  for fn in (b1, b2, bsum)]
        for comp in ("ex", "ey", "ez"):
            lhs = getattr(fields[2], comp)
            rhs = getattr(fields[0], comp) + getattr(fields[1], comp)
            assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), abs(rhs), 1e-3)


class TestIntensity:
    def test_zero_field(self):
        assert intensity(FieldSample(0j, 0j, 0j)) == 0.0

    def test_single_component(self):
        assert intensity(FieldSample(1.0 + 0j, 0j, 0j)) == pytest.approx(1.0 / 754.0)

    def test_annular_peak_matches_closed_form(self):
        c1 = 2.5
        ez = 2.0 * c1 * np.pi / LAM
        onaxis = intensity(FieldSample(0j, 0j, ez + 0j))
        assert annular_limit_intensity(0.0, LAM, c1, "radial") == pytest.approx(onaxis)
        assert onaxis == pytest.approx(2.0 * (c1 * np.pi / LAM) ** 2 / 377.0)


class TestAnnularLimit:
    def test_radial_peaks_on_axis(self):
        r = np.linspace(0.0, 2.0 * LAM, 200)
        prof = annular_limit_intensity(r, LAM, 1.0, "radial")
        assert np.argmax(prof) == 0

    def test_azimuthal_dark_on_axis(self):
        assert annular_limit_intensity(0.0, LAM, 1.0, "azimuthal") == 0.0

    def test_parabola_is_small_radius_limit(self):
        # J0^2(x) - (1 - x^2/2) is O(x^4) with coefficient 3/32
        k = 2.0 * np.pi / LAM
        peak = annular_limit_intensity(0.0, LAM, 1.0, "radial")
        for x in (0.05, 0.1, 0.3, 0.5):
            r = x / k
            exact = annular_limit_intensity(r, LAM, 1.0, "radial")
            para = annular_limit_intensity(r, LAM, 1.0, "radial", form="parabola")
            assert abs(exact - para) <= 0.3 * x ** 4 * peak

    def test_azimuthal_parabola_limit(self):
        # J1^2(x) - x^2/4 is O(x^4) with coefficient 1/16
        k = 2.0 * np.pi / LAM
        pref = annular_limit_intensity(0.0, LAM, 1.0, "radial")
        for x in (0.05, 0.2):
            r = x / k
            exact = annular_limit_intensity(r, LAM, 1.0, "azimuthal")
            para = annular_limit_intensity(r, LAM, 1.0, "azimuthal", form="parabola")
            assert para > 0.0
            assert abs(exact - para) <= 0.1 * x ** 4 * pref

    def test_rejects_unknown_mode_or_form(self):
        with pytest.raises(ValueError):
            annular_limit_intensity(0.0, LAM, 1.0, "linear")
        with pytest.raises(ValueError):
            annular_limit_intensity(0.0, LAM, 1.0, "radial", form="cubic")


class TestEnergyRedistribution:
    def test_annulus_narrows_lobe_and_raises_sidelobes(self):
        # blocking the pupil center shrinks the central |Ez|^2 lobe but
        # feeds the sidelobes
        r = np.linspace(0.0, 2.0 * LAM, 220)
        full = radial_pupil()
        annular = radial_pupil(alpha_inner=np.deg2rad(70.0))

        def ez2_profile(pupil):
            return np.array([abs(field_radial(FocalPoint(ri), pupil).ez) ** 2
                             for ri in r])

        def fwhm_and_sidelobe(prof):
            prof = prof / prof.max()
            j = np.flatnonzero(prof < 0.5)[0]
            rhalf = r[j - 1] + (0.5 - prof[j - 1]) * (r[j] - r[j - 1]) \
                / (prof[j] - prof[j - 1])
            interior = np.flatnonzero((prof[1:-1] >= prof[:-2])
                                      & (prof[1:-1] >= prof[2:])) + 1
            side = max(prof[j] for j in interior if j > 0)
            return 2.0 * rhalf, side

        fwhm_full, side_full = fwhm_and_sidelobe(ez2_profile(full))
        fwhm_ann, side_ann = fwhm_and_sidelobe(ez2_profile(annular))
        assert fwhm_ann < fwhm_full
        assert side_ann > side_full


class TestScanField:
    def test_single_node_equals_direct_call(self):
        pupil = radial_pupil()
        result = scan_field([0.5 * LAM], [0.2], [0.0], pupil)
        direct = field_radial(FocalPoint(0.5 * LAM, 0.2, 0.0), pupil)
        assert result.ex[0, 0, 0] == direct.ex
        assert result.ez[0, 0, 0] == direct.ez
        assert result.sample(0, 0, 0) == direct

    def test_ez_map_azimuth_independent(self):
        pupil = radial_pupil()
        result = scan_field(np.linspace(0.0, LAM, 4),
                            np.linspace(0.0, 2 * np.pi, 5), [0.0], pupil)
        ez2 = np.abs(result.ez[:, :, 0]) ** 2
        spread = ez2.max(axis=1) - ez2.min(axis=1)
        assert np.all(spread <= 1e-10 * ez2.max())

    def test_thread_count_does_not_change_values(self):
        pupil = azimuthal_pupil()
        r = np.linspace(0.0, 1.5 * LAM, 6)
        one = scan_field(r, [0.0, 1.0], [0.0], pupil, threads=1)
        four = scan_field(r, [0.0, 1.0], [0.0], pupil, threads=4)
        assert np.array_equal(one.ex, four.ex)
        assert np.array_equal(one.ey, four.ey)
        assert np.array_equal(one.ez, four.ez)
        assert np.array_equal(one.error, four.error)

    def test_quadrature_failures_collected_per_node(self):
        pupil = radial_pupil()
        strict = QuadratureSpec(rel_tol=1e-13, abs_tol=0.0, max_depth=1)
        result = scan_field([0.0, 0.9 * LAM], [0.0], [0.0], pupil, quad=strict)
        assert result.failures
        i, j, k, message = result.failures[0]
        assert np.isnan(result.ez[i, j, k])
        assert "max_depth" in message

    def test_rejects_bad_axes(self):
        with pytest.raises(ValueError):
            scan_field([], [0.0], [0.0], radial_pupil())
        with pytest.raises(ValueError):
            scan_field([1.0, 0.5], [0.0], [0.0], radial_pupil())


class TestTabulatedInputs:
    def test_tabulated_apodization_matches_callable(self):
        theta = np.linspace(0.0, np.pi / 2, 400)
        fn = tabulated_apodization(theta, np.sqrt(np.cos(theta)))
        probe = np.linspace(0.0, np.pi / 2, 111)
        # sqrt(cos) has infinite slope at 90 deg; the table is worst there
        assert np.max(np.abs(fn(probe) - np.sqrt(np.cos(probe)))) < 1e-3
        inner = probe[probe < np.deg2rad(85.0)]
        assert np.max(np.abs(fn(inner) - np.sqrt(np.cos(inner)))) < 3e-5

    def test_tabulated_polarization_reproduces_radial(self):
        theta = np.linspace(0.0, np.pi / 2, 80)
        phi = np.linspace(0.0, 2 * np.pi, 400)
        tg, pg = np.meshgrid(theta, phi, indexing="ij")
        a_fn, b_fn = tabulated_polarization(theta, phi, np.cos(pg), np.sin(pg))
        tt = np.linspace(0.05, 1.4, 23)
        pp = np.linspace(0.1, 6.1, 23)
        assert np.max(np.abs(a_fn(tt, pp) - np.cos(pp))) < 1e-3
        assert np.max(np.abs(b_fn(tt, pp) - np.sin(pp))) < 1e-3

    def test_table_validation(self):
        with pytest.raises(ValueError):
            tabulated_apodization([0.0, 1.0], [1.0])
        with pytest.raises(ValueError):
            tabulated_polarization([0.0, 1.0], [0.0, 1.0],
                                   np.ones((2, 3)), np.ones((2, 2)))
