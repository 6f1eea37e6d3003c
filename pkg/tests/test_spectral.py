import math

import numpy as np
import pytest

import wva_sense as w
from wva_sense.errors import NoSignalError, SpectrumFormatError


def gaussian_spectrum(grid, center, b, amplitude=1.0):
    nu = grid.frequencies()
    return w.Spectrum(grid=grid, samples=amplitude * np.exp(-((nu - center) ** 2) / b**2))


class TestMakeGrid:
    def test_three_point_nodes(self):
        g = w.make_grid(193.29, 2.0, 3)
        assert np.allclose(g.frequencies(), [192.29, 193.29, 194.29])

    def test_spacing(self):
        g = w.make_grid(193.29, 2.0, 2001)
        assert g.spacing == pytest.approx(0.001, rel=1e-12)

    def test_rejects_non_positive_frequencies(self):
        with pytest.raises(ValueError, match="non-positive frequency"):
            w.make_grid(1.0, 4.0, 5)

    @pytest.mark.parametrize("center,span,n", [(193.0, 0.0, 11), (193.0, -1.0, 11)])
    def test_rejects_bad_span(self, center, span, n):
        with pytest.raises(ValueError):
            w.make_grid(center, span, n)

    def test_rejects_too_few_points(self):
        with pytest.raises(ValueError):
            w.make_grid(193.0, 1.0, 1)


class TestSpectrumInvariants:
    def test_length_mismatch(self):
        g = w.make_grid(193.0, 1.0, 11)
        with pytest.raises(ValueError):
            w.Spectrum(grid=g, samples=np.zeros(10))

    def test_negative_samples_rejected(self):
        g = w.make_grid(193.0, 1.0, 11)
        samples = np.zeros(11)
        samples[3] = -1e-9
        with pytest.raises(ValueError):
            w.Spectrum(grid=g, samples=samples)

    def test_non_finite_rejected(self):
        g = w.make_grid(193.0, 1.0, 11)
        samples = np.zeros(11)
        samples[3] = np.nan
        with pytest.raises(ValueError):
            w.Spectrum(grid=g, samples=samples)


class TestCentroid:
    def test_symmetric_gaussian(self):
        g = w.make_grid(193.29, 4.0, 4001)
        s = gaussian_spectrum(g, 193.29, 0.1)
        assert w.centroid(s) == pytest.approx(193.29, abs=1e-9)

    def test_two_identical_lobes(self):
        g = w.make_grid(193.29, 4.0, 4001)
        nu = g.frequencies()
        samples = np.exp(-((nu - 193.19) ** 2) / 0.05**2) + np.exp(
            -((nu - 193.39) ** 2) / 0.05**2
        )
        assert w.centroid(w.Spectrum(grid=g, samples=samples)) == pytest.approx(
            193.29, abs=1e-9
        )

    def test_three_to_one_pair(self):
        # Closed-form first moment of an equal-width Gaussian mixture:
        # amplitudes 3:1 at center -+ d put the centroid at center - d/2.
        center, d = 193.29, 0.1
        g = w.make_grid(center, 4.0, 8001)
        nu = g.frequencies()
        samples = 3.0 * np.exp(-((nu - (center - d)) ** 2) / 0.05**2) + np.exp(
            -((nu - (center + d)) ** 2) / 0.05**2
        )
        assert w.centroid(w.Spectrum(grid=g, samples=samples)) == pytest.approx(
            center - d / 2, abs=1e-9
        )

    def test_zero_power_raises(self):
        g = w.make_grid(193.0, 1.0, 101)
        with pytest.raises(NoSignalError):
            w.centroid(w.Spectrum(grid=g, samples=np.zeros(101)))

    def test_scale_invariance_and_bounds(self):
        rng = np.random.default_rng(7)
        g = w.make_grid(193.0, 2.0, 501)
        for _ in range(20):
            samples = rng.random(501)
            s = w.Spectrum(grid=g, samples=samples)
            c = w.centroid(s)
            assert g.lo <= c <= g.hi
            scaled = w.Spectrum(grid=g, samples=samples * rng.uniform(1e-6, 1e6))
            assert w.centroid(scaled) == pytest.approx(c, rel=1e-12)

    def test_mirror_symmetric_spectrum(self):
        rng = np.random.default_rng(11)
        g = w.make_grid(193.0, 2.0, 501)
        half = rng.random(250)
        samples = np.concatenate([half, [rng.random()], half[::-1]])
        c = w.centroid(w.Spectrum(grid=g, samples=samples))
        assert abs(c - 193.0) < g.spacing

    def test_discretization_convergence(self):
        # Doubling n_points moves a smooth mixture centroid by < 1e-6 of the span.
        def c_at(n):
            g = w.make_grid(193.29, 4.0, n)
            nu = g.frequencies()
            samples = np.exp(-((nu - 193.2) ** 2) / 0.07**2) + 0.4 * np.exp(
                -((nu - 193.45) ** 2) / 0.11**2
            )
            return w.centroid(w.Spectrum(grid=g, samples=samples))

        assert abs(c_at(2001) - c_at(4001)) < 1e-6 * 4.0


class TestTotalPower:
    def test_zero(self):
        g = w.make_grid(193.0, 1.0, 101)
        assert w.total_power(w.Spectrum(grid=g, samples=np.zeros(101))) == 0.0

    def test_gaussian_integral(self):
        b = 0.1
        g = w.make_grid(193.0, 12 * b, 4001)
        s = gaussian_spectrum(g, 193.0, b)
        assert w.total_power(s) == pytest.approx(b * math.sqrt(math.pi), rel=1e-12)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        g = w.make_grid(193.0, 1.0, 301)
        a = rng.random(301)
        b = rng.random(301)
        pa = w.total_power(w.Spectrum(grid=g, samples=a))
        pb = w.total_power(w.Spectrum(grid=g, samples=b))
        pab = w.total_power(w.Spectrum(grid=g, samples=a + b))
        assert pab == pytest.approx(pa + pb, rel=1e-12)
        assert w.total_power(w.Spectrum(grid=g, samples=2 * a)) == pytest.approx(
            2 * pa, rel=1e-12
        )


class TestSuperGaussianFilter:
    def test_gain_at_center_and_half_width(self):
        g = w.make_grid(193.0, 2.0, 2001)
        s = w.Spectrum(grid=g, samples=np.ones(2001))
        out = w.super_gaussian_filter(s, 193.0, 0.5, 4)
        nu = g.frequencies()
        i_center = int(np.argmin(np.abs(nu - 193.0)))
        i_hw = int(np.argmin(np.abs(nu - 193.5)))
        assert out.samples[i_center] == pytest.approx(1.0, rel=1e-12)
        assert out.samples[i_hw] == pytest.approx(math.exp(-1.0), rel=1e-9)

    @pytest.mark.parametrize("order", [1, 3, 0, -2])
    def test_rejects_bad_order(self, order):
        g = w.make_grid(193.0, 1.0, 11)
        s = w.Spectrum(grid=g, samples=np.ones(11))
        with pytest.raises(ValueError):
            w.super_gaussian_filter(s, 193.0, 0.1, order)

    def test_rejects_bad_half_width(self):
        g = w.make_grid(193.0, 1.0, 11)
        s = w.Spectrum(grid=g, samples=np.ones(11))
        with pytest.raises(ValueError):
            w.super_gaussian_filter(s, 193.0, 0.0, 4)

    def test_never_increases_samples(self):
        rng = np.random.default_rng(5)
        g = w.make_grid(193.0, 2.0, 401)
        s = w.Spectrum(grid=g, samples=rng.random(401))
        out = w.super_gaussian_filter(s, 192.7, 0.3, 6)
        assert np.all(out.samples <= s.samples + 1e-15)

    def test_wide_filter_is_identity(self):
        rng = np.random.default_rng(6)
        g = w.make_grid(193.0, 2.0, 401)
        s = w.Spectrum(grid=g, samples=rng.random(401))
        out = w.super_gaussian_filter(s, 193.0, 1e9, 4)
        assert np.allclose(out.samples, s.samples, rtol=0, atol=1e-12)

    def test_side_lobe_suppression(self):
        # Main lobe at the filter center plus a 0.2-amplitude satellite at
        # 3x the filter half-width: after order-4 filtering the centroid
        # sits within 0.01 half-widths of the main lobe center.
        center, hw = 193.29, 0.2
        g = w.make_grid(center, 4.0, 16001)
        nu = g.frequencies()
        main = np.exp(-((nu - center) ** 2) / 0.08**2)
        side = 0.2 * np.exp(-((nu - center - 3 * hw) ** 2) / 0.08**2)
        s = w.Spectrum(grid=g, samples=main + side)
        unfiltered_shift = abs(w.centroid(s) - center)
        filtered = w.super_gaussian_filter(s, center, hw, 4)
        filtered_shift = abs(w.centroid(filtered) - center)
        assert unfiltered_shift > 0.05 * hw  # lobe visibly biases the raw centroid
        assert filtered_shift < 0.01 * hw


class TestUnitConversions:
    def test_1551_nm(self):
        assert w.wavelength_to_frequency(1551.0) == pytest.approx(193.290, abs=5e-4)

    def test_round_trip(self):
        for lam in (1200.0, 1549.0, 1551.0, 1650.0):
            back = w.frequency_to_wavelength(w.wavelength_to_frequency(lam))
            assert back == pytest.approx(lam, rel=1e-12)

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            w.wavelength_to_frequency(0.0)
        with pytest.raises(ValueError):
            w.frequency_to_wavelength(-1.0)

    def test_shift_conversion(self):
        units = w.UnitContext(reference_wavelength_nm=1551.0)
        dnu = units.nm_shift_to_frequency(-2.0)
        assert dnu == pytest.approx(0.249246, abs=1e-6)
        # longer wavelength <-> lower frequency
        assert units.nm_shift_to_frequency(+2.0) < 0
        assert units.frequency_shift_to_nm(dnu) == pytest.approx(-2.0, rel=1e-12)

    def test_reference_wavelength_validated(self):
        with pytest.raises(ValueError):
            w.UnitContext(reference_wavelength_nm=0.0)


class TestSpectrumCsv:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(9)
        g = w.make_grid(193.29, 2.0, 257)
        s = w.Spectrum(grid=g, samples=rng.random(257))
        path = tmp_path / "s.csv"
        w.write_spectrum_csv(s, path)
        back = w.read_spectrum_csv(path)
        assert back.grid.n_points == 257
        assert np.allclose(back.grid.frequencies(), g.frequencies(), rtol=1e-9)
        assert np.allclose(back.samples, s.samples, rtol=1e-9)

    def test_negative_power_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("frequency_thz,power\n193.0,1.0\n193.1,-0.5\n193.2,1.0\n")
        with pytest.raises(SpectrumFormatError, match="line 3"):
            w.read_spectrum_csv(path)

    def test_non_uniform_spacing_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("frequency_thz,power\n193.0,1\n193.1,1\n193.25,1\n193.35,1\n")
        with pytest.raises(SpectrumFormatError, match="non-uniform"):
            w.read_spectrum_csv(path)

    def test_non_monotone_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("frequency_thz,power\n193.0,1\n192.9,1\n")
        with pytest.raises(SpectrumFormatError, match="ascending"):
            w.read_spectrum_csv(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nu,p\n193.0,1\n193.1,1\n")
        with pytest.raises(SpectrumFormatError, match="header"):
            w.read_spectrum_csv(path)

    def test_non_numeric_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("frequency_thz,power\n193.0,1\n193.1,abc\n")
        with pytest.raises(SpectrumFormatError, match="line 3"):
            w.read_spectrum_csv(path)
