import numpy as np
import pytest

from nlfm_design.spectral import DesignGrid
from nlfm_design.stationary_phase import (
    CLOSED_FORM_KINDS,
    TG_GRID_POINTS,
    GroupDelayTable,
    NlfmSignal,
    build_group_delay,
    group_delay_closed_form,
    group_delay_numerical,
    invert_group_delay,
    synthesize_spm,
)
from nlfm_design.windows import SampledWindow, WindowSpec, evaluate_window

B = 100e6
T = 2.5e-6
FS = 1e9


@pytest.fixture(scope="module")
def grid():
    return DesignGrid.create(B, T, FS)


class TestClosedForms:
    @pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
    def test_boundary_conditions_exact(self, kind, grid):
        table = group_delay_closed_form(WindowSpec(kind), grid)
        assert table.delays[0] == -T / 2
        assert table.delays[-1] == T / 2

    @pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
    def test_zero_at_center(self, kind, grid):
        table = group_delay_closed_form(WindowSpec(kind), grid)
        center = (len(table.delays) - 1) // 2
        assert table.frequencies[center] == 0.0
        assert abs(table.delays[center]) < T * 1e-12

    @pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
    def test_monotone(self, kind, grid):
        table = group_delay_closed_form(WindowSpec(kind), grid)
        assert np.all(np.diff(table.delays) > 0)

    def test_degenerate_raised_cosine_is_linear(self, grid):
        table = group_delay_closed_form(WindowSpec("raised-cosine", {"k": 1.0}), grid)
        np.testing.assert_allclose(
            table.delays, T * table.frequencies / B, atol=T * 1e-12
        )

    def test_unsupported_kind(self, grid):
        with pytest.raises(ValueError, match="closed-form"):
            group_delay_closed_form(WindowSpec("kaiser"), grid)


class TestNumericalGroupDelay:
    def test_constant_window_is_linear(self, grid):
        win = SampledWindow(values=np.ones(TG_GRID_POINTS))
        table = group_delay_numerical(win, grid)
        np.testing.assert_allclose(
            table.delays, T * table.frequencies / B, atol=T * 1e-12
        )

    @pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
    def test_matches_closed_form(self, kind, grid):
        win = evaluate_window(WindowSpec(kind), TG_GRID_POINTS)
        numerical = group_delay_numerical(win, grid)
        closed = group_delay_closed_form(WindowSpec(kind), grid)
        assert np.max(np.abs(numerical.delays - closed.delays)) <= T * 1e-4

    def test_boundaries_exact_by_construction(self, grid):
        win = evaluate_window(WindowSpec("kaiser"), TG_GRID_POINTS)
        table = group_delay_numerical(win, grid)
        assert table.delays[0] == -T / 2
        assert table.delays[-1] == T / 2

    def test_zero_energy_rejected(self, grid):
        with pytest.raises(ValueError, match="zero total energy"):
            group_delay_numerical(SampledWindow(values=np.zeros(101)), grid)

    def test_monotonicity_enforced(self):
        with pytest.raises(ValueError, match="nondecreasing"):
            GroupDelayTable(
                frequencies=np.array([0.0, 1.0, 2.0]),
                delays=np.array([0.0, 1.0, 0.5]),
                source="numerical",
            )


class TestInvertGroupDelay:
    def test_boundaries(self, grid):
        table = group_delay_closed_form(WindowSpec("raised-cosine"), grid)
        assert invert_group_delay(table, -T / 2) == -B / 2
        assert invert_group_delay(table, T / 2) == B / 2
        assert invert_group_delay(table, 0.0) == pytest.approx(0.0, abs=B * 1e-12)

    def test_linear_table_analytic_inverse(self, grid):
        win = SampledWindow(values=np.ones(TG_GRID_POINTS))
        table = group_delay_numerical(win, grid)
        rng = np.random.default_rng(21)
        t = rng.uniform(-T / 2, T / 2, size=200)
        np.testing.assert_allclose(
            invert_group_delay(table, t), B * t / T, rtol=1e-9, atol=B * 1e-9
        )

    @pytest.mark.parametrize("kind", ["raised-cosine", "gaussian", "kaiser"])
    def test_round_trip(self, kind, grid):
        table = build_group_delay(WindowSpec(kind), grid)
        rng = np.random.default_rng(22)
        t = rng.uniform(-T / 2, T / 2, size=1000)
        f = invert_group_delay(table, t)
        roundtrip = np.interp(f, table.frequencies, table.delays)
        assert np.max(np.abs(roundtrip - t)) <= T * 1e-6

    def test_outside_domain_rejected(self, grid):
        table = group_delay_closed_form(WindowSpec("poisson"), grid)
        with pytest.raises(ValueError, match="pulse interval"):
            invert_group_delay(table, T)
        with pytest.raises(ValueError, match="pulse interval"):
            invert_group_delay(table, np.array([0.0, -T]))

    def test_flat_segment_resolves_left(self):
        # A zero run in the window makes the delay table flat; the
        # inversion must pick the left edge of the bracket.
        delays = np.array([-2.0, -1.0, -1.0, -1.0, 0.0, 1.0, 2.0])
        freqs = np.linspace(-3.0, 3.0, 7)
        table = GroupDelayTable(frequencies=freqs, delays=delays, source="numerical")
        assert invert_group_delay(table, -1.0) == freqs[1]

    def test_scalar_in_scalar_out(self, grid):
        table = group_delay_closed_form(WindowSpec("raised-cosine"), grid)
        out = invert_group_delay(table, 0.25 * T)
        assert np.ndim(out) == 0


class TestSynthesize:
    @pytest.mark.parametrize("kind", ["raised-cosine", "chebyshev", "poisson"])
    def test_unit_modulus(self, kind, grid):
        sig = synthesize_spm(WindowSpec(kind), grid)
        assert np.max(np.abs(np.abs(sig.samples) - 1.0)) < 1e-12

    def test_phase_starts_at_zero(self, grid):
        sig = synthesize_spm(WindowSpec("taylor"), grid)
        assert sig.phase[0] == 0.0

    def test_inst_freq_in_band_and_nondecreasing(self, grid):
        for kind in ("gaussian", "kaiser"):
            sig = synthesize_spm(WindowSpec(kind), grid)
            assert np.all(sig.inst_freq >= -B / 2)
            assert np.all(sig.inst_freq <= B / 2)
            assert np.all(np.diff(sig.inst_freq) >= 0)

    def test_lfm_quadratic_phase(self, grid):
        # k = 1 collapses the raised cosine to a flat window, i.e. an
        # LFM chirp with phase pi B/T (t^2 - T^2/4).
        sig = synthesize_spm(WindowSpec("raised-cosine", {"k": 1.0}), grid)
        t = grid.time_grid()
        expected = np.pi * B / T * (t**2 - T**2 / 4.0)
        assert np.max(np.abs(sig.phase - expected)) <= 1e-6

    def test_phase_even_symmetry(self, grid):
        # Symmetric windows give an odd frequency law, so the phase is
        # even about t = 0; check on a symmetric time grid.
        table = build_group_delay(WindowSpec("gaussian"), grid)
        t = np.linspace(-T / 2, T / 2, 2001)
        f = invert_group_delay(table, t)
        dt = t[1] - t[0]
        phase = np.concatenate(
            [[0.0], np.cumsum((f[1:] + f[:-1]) / 2.0) * (2.0 * np.pi * dt)]
        )
        assert np.max(np.abs(phase - phase[::-1])) <= 1e-6

    def test_signal_metadata(self, grid):
        sig = synthesize_spm(WindowSpec("poisson"), grid)
        assert sig.num_samples == grid.num_samples
        assert sig.sample_rate == FS
        assert sig.bandwidth == B
        assert sig.pulse_width == T
        assert sig.amplitude == 1.0


class TestFromSamples:
    def test_derotation_and_phase(self, grid):
        rng = np.random.default_rng(5)
        base = synthesize_spm(WindowSpec("raised-cosine"), grid)
        rotated = base.samples * np.exp(1j * 1.234)
        sig = NlfmSignal.from_samples(rotated, grid)
        assert sig.phase[0] == 0.0
        assert np.max(np.abs(np.abs(sig.samples) - 1.0)) < 1e-12
        np.testing.assert_allclose(sig.phase, base.phase, atol=1e-6)
