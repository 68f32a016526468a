"""Batch execution of waveform designs and result assembly.

A run designs one (window, method) pair and measures its ACF.  The
stationary-phase method ("spm") renders directly on the configured
sample-rate grid.  The iterative refinement ("pm") operates on its own
critically sampled design grid, where every transform bin lies inside
the band and the spectral matching error is meaningful across the
whole grid; its signal, spectrum and ACF are reported on that grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .metrics import AcfResult, autocorrelation, improvement_report, peak_sidelobe_level
from .optimizer import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_REL_TOLERANCE,
    OptimizerConfig,
    OptimizerTrace,
    phase_update,
    run as run_optimizer,
)
from .spectral import DesignGrid, band_magnitude, forward, next_power_of_two
from .stationary_phase import NlfmSignal, synthesize_spm
from .windows import WINDOW_KINDS, WindowSpec, evaluate_window

METHODS = ("spm", "pm")

# The refinement grid oversamples the time-bandwidth product by this
# factor in the frequency domain.
SPECTRAL_OVERSAMPLE = 8


@dataclass(frozen=True)
class RunConfig:
    """Design parameters for a batch of (window, method) runs."""

    bandwidth_hz: float = 100e6
    pulse_width_s: float = 2.5e-6
    sample_rate_hz: float = 1e9
    windows: tuple[WindowSpec, ...] = tuple(WindowSpec(kind) for kind in WINDOW_KINDS)
    methods: tuple[str, ...] = METHODS
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    transform_length: int | None = None
    output_dir: str | None = None

    def __post_init__(self):
        if self.bandwidth_hz <= 0 or self.pulse_width_s <= 0 or self.sample_rate_hz <= 0:
            raise ValueError("bandwidth, pulse width and sample rate must be positive")
        if self.bandwidth_hz > self.sample_rate_hz:
            raise ValueError("bandwidth must not exceed the sample rate")
        if self.pulse_width_s * self.sample_rate_hz < 8:
            raise ValueError("pulse_width * sample_rate must be at least 8 samples")
        if not self.windows:
            raise ValueError("at least one window is required")
        if not self.methods:
            raise ValueError("at least one method is required")
        for method in self.methods:
            if method not in METHODS:
                raise ValueError(
                    f"unknown method {method!r}; valid methods: {', '.join(METHODS)}"
                )
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate methods in config")

    def render_grid(self) -> DesignGrid:
        return DesignGrid.create(
            self.bandwidth_hz,
            self.pulse_width_s,
            self.sample_rate_hz,
            transform_length=self.transform_length,
        )


def refinement_grid(bandwidth_hz: float, pulse_width_s: float) -> DesignGrid:
    """Critically sampled grid for the iterative refinement.

    K is the smallest power of two at least SPECTRAL_OVERSAMPLE times
    the time-bandwidth product; the sample rate B K/(K-1) leaves only
    the Nyquist bin outside the band, so the target magnitude covers
    the whole transform.
    """
    n0 = int(round(bandwidth_hz * pulse_width_s))
    if n0 < 2:
        raise ValueError(
            "time-bandwidth product too small for spectral refinement (need >= 2)"
        )
    k = next_power_of_two(SPECTRAL_OVERSAMPLE * n0)
    sample_rate = bandwidth_hz * k / (k - 1)
    return DesignGrid.create(bandwidth_hz, pulse_width_s, sample_rate, transform_length=k)


@dataclass(eq=False)
class RunResult:
    """One designed waveform with its spectrum and ACF analysis."""

    window: WindowSpec
    method: str
    grid: DesignGrid
    signal: NlfmSignal
    acf: AcfResult
    spectrum_frequencies: np.ndarray
    spectrum_target: np.ndarray
    spectrum_achieved: np.ndarray
    trace: OptimizerTrace | None = None

    def summary(self) -> dict:
        psl_finite = self.acf.psl_db is not None and np.isfinite(self.acf.psl_db)
        out = {
            "window": {"kind": self.window.kind, "params": self.window.resolved_params()},
            "method": self.method,
            "num_samples": self.grid.num_samples,
            "transform_length": self.grid.transform_length,
            "band_bins": self.grid.band_bin_count,
            "sample_rate_hz": self.grid.sample_rate,
            "psl_db": float(self.acf.psl_db) if psl_finite else None,
            "psl_status": self.acf.psl_status,
            "mainlobe_null_width_s": self.acf.mainlobe_null_width_s,
            "version": __version__,
        }
        if self.trace is not None:
            out["iterations_run"] = self.trace.iterations_run
            out["stop_reason"] = self.trace.stop_reason
            out["e_min_first"] = float(self.trace.e_min[0])
            out["e_min_last"] = float(self.trace.e_min[-1])
        return out

    def payload(self) -> dict:
        """JSON-ready dict with the full arrays behind the CSV outputs."""
        sig = self.signal
        t = self.grid.time_grid()
        data = {
            "summary": self.summary(),
            "signal": {
                "n": list(range(sig.num_samples)),
                "t_s": t.tolist(),
                "phase_rad": sig.phase.tolist(),
                "inst_freq_hz": np.asarray(sig.inst_freq).tolist(),
                "re": sig.samples.real.tolist(),
                "im": sig.samples.imag.tolist(),
            },
            "acf": {
                "lag_s": self.acf.lag_seconds.tolist(),
                "magnitude_db": self.acf.magnitude_db.tolist(),
            },
            "spectrum": {
                "f_hz": self.spectrum_frequencies.tolist(),
                "target_mag": self.spectrum_target.tolist(),
                "achieved_mag": self.spectrum_achieved.tolist(),
            },
            "convergence": None,
        }
        if self.trace is not None:
            e = self.trace.e_min
            data["convergence"] = {
                "iteration": list(range(1, len(e) + 1)),
                "e_min": e.tolist(),
                "e_min_normalized": (e / e[0]).tolist(),
            }
        return data


def _spectrum_view(signal: NlfmSignal, target: np.ndarray, grid: DesignGrid):
    """Target and achieved magnitudes sorted by ascending frequency."""
    achieved = np.abs(forward(signal.samples, grid))
    peak = np.max(achieved)
    if peak > 0:
        achieved = achieved / peak
    order = np.argsort(grid.bin_frequencies(), kind="stable")
    return grid.bin_frequencies()[order], target[order], achieved[order]


def execute_run(window: WindowSpec, method: str, config: RunConfig) -> RunResult:
    """Design one waveform and analyze it."""
    if method == "spm":
        grid = config.render_grid()
        signal = synthesize_spm(window, grid)
        trace = None
    elif method == "pm":
        grid = refinement_grid(config.bandwidth_hz, config.pulse_width_s)
        taper = evaluate_window(window, grid.band_bin_count)
        target_mag = band_magnitude(taper, grid)
        if config.optimizer.initial_phase is not None:
            theta0 = np.asarray(config.optimizer.initial_phase, dtype=float)
        else:
            theta0 = phase_update(synthesize_spm(window, grid).samples, grid)
        trace = run_optimizer(target_mag, theta0, config.optimizer, grid)
        signal = trace.final_signal
    else:
        raise ValueError(f"unknown method {method!r}")

    acf = autocorrelation(signal.samples, grid.sample_rate)
    peak_sidelobe_level(acf)

    taper = evaluate_window(window, grid.band_bin_count)
    target = band_magnitude(taper, grid)
    freqs, target_sorted, achieved_sorted = _spectrum_view(signal, target, grid)
    return RunResult(
        window=window,
        method=method,
        grid=grid,
        signal=signal,
        acf=acf,
        spectrum_frequencies=freqs,
        spectrum_target=target_sorted,
        spectrum_achieved=achieved_sorted,
        trace=trace,
    )


@dataclass(eq=False)
class BatchResult:
    config: RunConfig
    runs: list[RunResult]

    def find(self, kind: str, method: str) -> RunResult | None:
        for r in self.runs:
            if r.window.kind == kind and r.method == method:
                return r
        return None

    def report(self) -> dict:
        """Aggregate PSL table and per-window improvement deltas."""
        psl_entries = []
        for r in self.runs:
            s = r.summary()
            psl_entries.append(
                {
                    "window": r.window.kind,
                    "method": r.method,
                    "psl_db": s["psl_db"],
                    "psl_status": s["psl_status"],
                    "mainlobe_null_width_s": s["mainlobe_null_width_s"],
                }
            )
        improvements = []
        excluded = []
        deltas = []
        for window in self.config.windows:
            spm = self.find(window.kind, "spm")
            pm = self.find(window.kind, "pm")
            if spm is None or pm is None:
                continue
            delta = improvement_report(spm.acf, pm.acf)
            entry = {
                "window": window.kind,
                "spm_psl_db": spm.summary()["psl_db"],
                "pm_psl_db": pm.summary()["psl_db"],
                "improvement_db": None if np.isnan(delta) else float(delta),
            }
            improvements.append(entry)
            if np.isnan(delta):
                excluded.append(window.kind)
            else:
                deltas.append(delta)
        mean = float(np.mean(deltas)) if deltas else None
        return {
            "version": __version__,
            "config": config_echo(self.config),
            "psl": psl_entries,
            "improvements": improvements,
            "mean_improvement_db": mean,
            "excluded_windows": excluded,
        }


def config_echo(config: RunConfig) -> dict:
    return {
        "bandwidth_hz": config.bandwidth_hz,
        "pulse_width_s": config.pulse_width_s,
        "sample_rate_hz": config.sample_rate_hz,
        "windows": [
            {"kind": w.kind, "params": w.resolved_params()} for w in config.windows
        ],
        "methods": list(config.methods),
        "max_iterations": config.optimizer.max_iterations,
        "rel_tolerance": config.optimizer.rel_tolerance,
        "transform_length": config.transform_length,
    }


def execute_batch(config: RunConfig) -> BatchResult:
    """Run every (window, method) combination in the config."""
    runs = [
        execute_run(window, method, config)
        for window in config.windows
        for method in config.methods
    ]
    return BatchResult(config=config, runs=runs)
