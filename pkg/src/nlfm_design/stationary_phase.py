"""Stationary-phase NLFM synthesis.

The chirp's group time delay over the band is proportional to the
cumulative integral of the spectral window, pinned to T_g(+-B/2) =
+-T/2.  Inverting T_g gives the frequency-versus-time law; integrating
that gives the phase of a constant-amplitude waveform whose power
spectrum approximates the window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import DesignGrid
from .windows import SampledWindow, WindowSpec, erf, evaluate_window, taylor_coefficients

# Frequency-grid resolution for tabulated group delays (odd, so f = 0
# is a grid point).
TG_GRID_POINTS = 4097

# Window kinds whose group delay has a closed form.
CLOSED_FORM_KINDS = ("raised-cosine", "taylor", "gaussian", "poisson")


@dataclass(frozen=True, eq=False)
class GroupDelayTable:
    """Monotone tabulation of T_g(f) over [-B/2, +B/2]."""

    frequencies: np.ndarray
    delays: np.ndarray
    source: str

    def __post_init__(self):
        if np.any(np.diff(self.delays) < 0):
            raise ValueError("group delay table must be nondecreasing")


@dataclass(frozen=True, eq=False)
class NlfmSignal:
    """Constant-modulus baseband pulse with its phase and frequency laws.

    samples(n) = amplitude * exp(j phase(n)) at t_n = -T/2 + n/fs, with
    phase(0) = 0 and inst_freq the instantaneous frequency in Hz.
    """

    samples: np.ndarray
    phase: np.ndarray
    inst_freq: np.ndarray
    bandwidth: float
    pulse_width: float
    sample_rate: float
    amplitude: float = 1.0

    @property
    def num_samples(self) -> int:
        return len(self.samples)

    @classmethod
    def from_samples(cls, samples: np.ndarray, grid: DesignGrid) -> "NlfmSignal":
        """Wrap raw unit-modulus samples, deriving phase and frequency.

        The global phase is fixed so the first sample's phase is zero
        (it carries no information; sidelobe metrics are invariant to
        it).  Instantaneous frequency comes from the gradient of the
        unwrapped phase.
        """
        rotated = samples * np.exp(-1j * np.angle(samples[0]))
        phase = np.unwrap(np.angle(rotated))
        phase = phase - phase[0]
        inst_freq = np.gradient(phase) * grid.sample_rate / (2.0 * np.pi)
        return cls(
            samples=rotated,
            phase=phase,
            inst_freq=inst_freq,
            bandwidth=grid.bandwidth,
            pulse_width=grid.pulse_width,
            sample_rate=grid.sample_rate,
        )


def _frequency_grid(bandwidth: float, points: int) -> np.ndarray:
    return np.linspace(-bandwidth / 2.0, bandwidth / 2.0, points)


def group_delay_closed_form(spec: WindowSpec, grid: DesignGrid) -> GroupDelayTable:
    """Tabulate the closed-form group delay for the four analytic kinds."""
    if spec.kind not in CLOSED_FORM_KINDS:
        raise ValueError(
            f"no closed-form group delay for {spec.kind!r}; use group_delay_numerical"
        )
    b = grid.bandwidth
    t = grid.pulse_width
    f = _frequency_grid(b, TG_GRID_POINTS)

    if spec.kind == "raised-cosine":
        k = spec.param("k")
        delays = t * f / b + (t / (2 * np.pi)) * ((1 - k) / (1 + k)) * np.sin(
            2 * np.pi * f / b
        )
    elif spec.kind == "taylor":
        coeffs = taylor_coefficients(spec.param("eta_db"), int(spec.param("n_bar")))
        delays = t * f / b
        for m, f_m in enumerate(coeffs, start=1):
            delays = delays + (t / (2 * np.pi)) * (f_m / m) * np.sin(2 * np.pi * m * f / b)
    elif spec.kind == "gaussian":
        k = spec.param("k")
        scale = t / (2.0 * erf(np.sqrt(k) / 4.0))
        delays = scale * np.array([erf(v) for v in f * np.sqrt(k) / (2.0 * b)])
    else:  # poisson
        k = spec.param("k")
        scale = t / (2.0 * (1.0 - np.exp(-k / 2.0)))
        delays = scale * np.sign(f) * (1.0 - np.exp(-k * np.abs(f) / b))

    # The endpoints are exactly +-T/2 analytically; pin them so the
    # inversion domain is [-T/2, T/2] without float fuzz.
    delays[0] = -t / 2.0
    delays[-1] = t / 2.0
    return GroupDelayTable(frequencies=f, delays=delays, source=f"closed-form:{spec.kind}")


def group_delay_numerical(window: SampledWindow, grid: DesignGrid) -> GroupDelayTable:
    """Group delay from trapezoidal integration of the window samples.

    The M window samples are mapped onto a uniform frequency grid over
    [-B/2, +B/2].  The two boundary samples are clamped to their
    neighbors before integrating: DFT-derived tapers (Dolph-Chebyshev)
    carry single-sample end spikes that would otherwise act as point
    masses in the spectral density; for smooth tapers the clamp is a
    no-op at grid resolution.  The cumulative integral is normalized
    so the boundary conditions T_g(+-B/2) = +-T/2 hold exactly.
    """
    values = np.asarray(window.values, dtype=float).copy()
    if np.any(values < 0):
        raise ValueError("window values must be nonnegative")
    if len(values) < 3:
        raise ValueError("need at least 3 window samples")
    values[0] = values[1]
    values[-1] = values[-2]
    if not np.any(values > 0):
        raise ValueError("window has zero total energy")

    f = _frequency_grid(grid.bandwidth, len(values))
    df = f[1] - f[0]
    cumulative = np.concatenate(
        [[0.0], np.cumsum((values[1:] + values[:-1]) / 2.0) * df]
    )
    t = grid.pulse_width
    delays = -t / 2.0 + t * cumulative / cumulative[-1]
    delays[0] = -t / 2.0
    delays[-1] = t / 2.0
    return GroupDelayTable(frequencies=f, delays=delays, source="numerical")


def invert_group_delay(table: GroupDelayTable, t) -> np.ndarray | float:
    """Frequency at which the group delay equals ``t``.

    Binary search over the monotone table plus linear interpolation
    between bracketing grid points.  Flat segments resolve to the left
    edge of the bracket.  Accepts a scalar or an array of times within
    [-T/2, +T/2].
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    d = table.delays
    f = table.frequencies
    if np.any(t_arr < d[0]) or np.any(t_arr > d[-1]):
        raise ValueError("time outside the pulse interval [-T/2, T/2]")

    idx = np.searchsorted(d, t_arr, side="left")
    out = np.empty_like(t_arr)
    exact = d[np.minimum(idx, len(d) - 1)] == t_arr
    out[exact] = f[idx[exact]]
    rest = ~exact
    j = idx[rest]
    tt = t_arr[rest]
    # side="left" guarantees d[j-1] < tt <= d[j], so the bracket has
    # strictly positive width.
    out[rest] = f[j - 1] + (tt - d[j - 1]) * (f[j] - f[j - 1]) / (d[j] - d[j - 1])
    return out if np.ndim(t) else float(out[0])


def build_group_delay(spec: WindowSpec, grid: DesignGrid) -> GroupDelayTable:
    """Closed form where available, otherwise numerical integration."""
    if spec.kind in CLOSED_FORM_KINDS:
        return group_delay_closed_form(spec, grid)
    return group_delay_numerical(evaluate_window(spec, TG_GRID_POINTS), grid)


def synthesize_spm(spec: WindowSpec, grid: DesignGrid) -> NlfmSignal:
    """Design the stationary-phase NLFM pulse for a window spec.

    Samples the inverse group delay at the grid instants, integrates
    2 pi f(t) by the trapezoid rule with phase(-T/2) = 0, and returns
    the unit-amplitude waveform exp(j phase).
    """
    table = build_group_delay(spec, grid)
    t = grid.time_grid()
    inst_freq = invert_group_delay(table, t)
    dt = 1.0 / grid.sample_rate
    phase = np.concatenate(
        [[0.0], np.cumsum((inst_freq[1:] + inst_freq[:-1]) / 2.0) * (2.0 * np.pi * dt)]
    )
    return NlfmSignal(
        samples=np.exp(1j * phase),
        phase=phase,
        inst_freq=inst_freq,
        bandwidth=grid.bandwidth,
        pulse_width=grid.pulse_width,
        sample_rate=grid.sample_rate,
    )
