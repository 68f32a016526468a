"""Constant-modulus NLFM waveform design and sidelobe analysis."""

from ._version import __version__

from .windows import WindowSpec, SampledWindow, evaluate_window, bessel_i0, erf
from .spectral import DesignGrid, forward, adjoint, band_magnitude
from .stationary_phase import (
    GroupDelayTable,
    NlfmSignal,
    group_delay_closed_form,
    group_delay_numerical,
    invert_group_delay,
    synthesize_spm,
)
from .optimizer import OptimizerConfig, OptimizerTrace, run as optimize
from .metrics import AcfResult, autocorrelation, peak_sidelobe_level, improvement_report
from .pipeline import RunConfig, execute_run, execute_batch

__all__ = [
    "__version__",
    "WindowSpec",
    "SampledWindow",
    "evaluate_window",
    "bessel_i0",
    "erf",
    "DesignGrid",
    "forward",
    "adjoint",
    "band_magnitude",
    "GroupDelayTable",
    "NlfmSignal",
    "group_delay_closed_form",
    "group_delay_numerical",
    "invert_group_delay",
    "synthesize_spm",
    "OptimizerConfig",
    "OptimizerTrace",
    "optimize",
    "AcfResult",
    "autocorrelation",
    "peak_sidelobe_level",
    "improvement_report",
    "RunConfig",
    "execute_run",
    "execute_batch",
]
