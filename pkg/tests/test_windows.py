import math

import numpy as np
import pytest

from nlfm_design.windows import (
    DEFAULT_PARAMS,
    WINDOW_KINDS,
    SampledWindow,
    WindowSpec,
    bessel_i0,
    chebyshev_dft_coefficients,
    erf,
    evaluate_window,
    taylor_coefficients,
)

M = 257


class TestBesselI0:
    def test_at_zero(self):
        assert bessel_i0(0.0) == 1.0

    @pytest.mark.parametrize(
        "x, expected",
        [
            # Frozen from the defining series summed at 40-digit precision.
            (1.0, 1.2660658777520084),
            (2.0, 2.2795853023360673),
            (4.5, 17.481171855609276),
        ],
    )
    def test_series_values(self, x, expected):
        assert bessel_i0(x) == pytest.approx(expected, rel=1e-14)

    def test_matches_scipy(self):
        scipy_special = pytest.importorskip("scipy.special")
        for x in np.linspace(0.0, 12.0, 25):
            assert bessel_i0(float(x)) == pytest.approx(
                float(scipy_special.i0(x)), rel=1e-12
            )

    def test_even(self):
        assert bessel_i0(-3.0) == bessel_i0(3.0)


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_odd(self):
        for x in (0.3, 1.7, 2.9):
            assert erf(-x) == -erf(x)

    @pytest.mark.parametrize(
        "x, expected",
        [(1.0, 0.8427007929497149), (0.5, 0.5204998778130465)],
    )
    def test_values(self, x, expected):
        assert erf(x) == pytest.approx(expected, abs=1e-10)


class TestTaylorCoefficients:
    def test_default_pairing(self):
        # Frozen from the product form at 40-digit precision.
        coeffs = taylor_coefficients(88.5, 2)
        assert len(coeffs) == 1
        assert coeffs[0] == pytest.approx(0.7091784561296319, rel=1e-12)

    def test_nbar_one_is_rectangular(self):
        assert len(taylor_coefficients(60.0, 1)) == 0

    def test_invalid_nbar(self):
        with pytest.raises(ValueError):
            taylor_coefficients(60.0, 0)


class TestWindowSpec:
    def test_defaults_match_reference_constants(self):
        assert WindowSpec("raised-cosine").param("k") == 0.17
        assert WindowSpec("taylor").param("eta_db") == 88.5
        assert WindowSpec("taylor").param("n_bar") == 2
        assert WindowSpec("chebyshev").param("alpha") == 2.0
        assert WindowSpec("gaussian").param("k") == 35.51
        assert WindowSpec("poisson").param("k") == 2.5
        assert WindowSpec("kaiser").param("beta") == 4.5

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="valid kinds"):
            WindowSpec("hamming")

    def test_unknown_param(self):
        with pytest.raises(ValueError, match="unknown parameter"):
            WindowSpec("poisson", {"beta": 1.0})

    def test_nonpositive_param(self):
        with pytest.raises(ValueError, match="positive"):
            WindowSpec("poisson", {"k": -2.5})

    def test_fractional_nbar(self):
        with pytest.raises(ValueError, match="n_bar"):
            WindowSpec("taylor", {"n_bar": 2.5})


class TestEvaluateWindow:
    def test_even_m_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            evaluate_window(WindowSpec("poisson"), 256)

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            evaluate_window(WindowSpec("poisson"), 1)

    def test_raised_cosine_center_and_edge(self):
        w = evaluate_window(WindowSpec("raised-cosine"), M).values
        center = (M - 1) // 2
        assert w[center] == pytest.approx(1.0, abs=1e-15)
        assert w[0] == pytest.approx(0.17, rel=1e-12)
        assert w[-1] == pytest.approx(0.17, rel=1e-12)

    def test_poisson_edge_value(self):
        # exp(-k |n| / (M-1)) at |n| = (M-1)/2 with k = 2.5.
        w = evaluate_window(WindowSpec("poisson"), M).values
        assert w[0] == pytest.approx(0.2865047968601901, rel=1e-12)

    def test_kaiser_center_and_edges(self):
        w = evaluate_window(WindowSpec("kaiser"), M).values
        center = (M - 1) // 2
        assert w[center] == 1.0
        assert w[0] > 0.0
        assert np.isfinite(w[0])

    @pytest.mark.parametrize("kind", WINDOW_KINDS)
    def test_symmetry_nonnegativity_peak(self, kind):
        w = evaluate_window(WindowSpec(kind), M).values
        assert np.all(w >= 0)
        assert np.max(w) == 1.0
        np.testing.assert_allclose(w, w[::-1], rtol=1e-12, atol=1e-15)

    @pytest.mark.parametrize("kind", WINDOW_KINDS)
    def test_indices_grid(self, kind):
        win = evaluate_window(WindowSpec(kind), M)
        assert win.indices[0] == -(M - 1) // 2
        assert win.indices[-1] == (M - 1) // 2
        assert 0 in win.indices


class TestChebyshev:
    def test_forward_dft_recovers_coefficients(self):
        # Transforming the taps back must reproduce the equiripple
        # coefficients up to one overall scale.
        w = evaluate_window(WindowSpec("chebyshev"), M).values
        n = np.arange(M) - (M - 1) // 2
        m = np.arange(M)
        recovered = np.array(
            [np.sum(w * np.exp(-2j * np.pi * mm * n / M)) for mm in m]
        )
        expected = chebyshev_dft_coefficients(2.0, M)
        scale = recovered[0].real / expected[0]
        np.testing.assert_allclose(recovered.real / scale, expected, atol=1e-8)
        np.testing.assert_allclose(recovered.imag, 0.0, atol=1e-8 * abs(scale))

    def test_matches_scipy_chebwin(self):
        signal_windows = pytest.importorskip("scipy.signal.windows")
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            reference = signal_windows.chebwin(M, at=40)
        w = evaluate_window(WindowSpec("chebyshev"), M).values
        np.testing.assert_allclose(w, reference, atol=1e-12)

    def test_alpha_sets_attenuation_ratio(self):
        coeffs = chebyshev_dft_coefficients(2.0, M)
        assert coeffs[0] == pytest.approx(1.0, rel=1e-12)
        # Equiripple region: wherever the polynomial argument is inside
        # [-1, 1] the coefficients sit at or below 1/ratio in magnitude.
        beta = np.cosh(np.arccosh(100.0) / (M - 1))
        ripple = np.abs(beta * np.cos(np.pi * np.arange(M) / M)) <= 1.0
        assert ripple.any()
        assert np.max(np.abs(coeffs[ripple])) <= 1.0 / 100.0 + 1e-12


class TestSampledWindow:
    def test_size(self):
        win = SampledWindow(values=np.ones(5))
        assert win.size == 5
