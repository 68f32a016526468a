"""HTTP service exposing the waveform designer.

Endpoints (all under /api/v1):

* ``GET  /health``   liveness and version
* ``GET  /windows``  supported window kinds with default parameters
* ``POST /design``   design a single (window, method) run
* ``POST /runs``     run a full batch and return results plus report

The CLI is a thin client of ``POST /runs``; the response carries every
array needed to write the CSV/JSON output tree.
"""

from __future__ import annotations

import argparse

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, field_validator, model_validator

from ._version import __version__
from .optimizer import DEFAULT_MAX_ITERATIONS, DEFAULT_REL_TOLERANCE, OptimizerConfig
from .pipeline import METHODS, RunConfig, execute_batch, execute_run
from .windows import DEFAULT_PARAMS, WINDOW_KINDS, WindowSpec


class WindowModel(BaseModel):
    kind: str
    params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self):
        try:
            WindowSpec(self.kind, self.params)
        except ValueError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def to_spec(self) -> WindowSpec:
        return WindowSpec(self.kind, self.params)


class OptimizerModel(BaseModel):
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1)
    rel_tolerance: float = Field(default=DEFAULT_REL_TOLERANCE, ge=0.0)

    def to_config(self) -> OptimizerConfig:
        return OptimizerConfig(
            max_iterations=self.max_iterations, rel_tolerance=self.rel_tolerance
        )


class DesignParameters(BaseModel):
    bandwidth_hz: float = Field(default=100e6, gt=0)
    pulse_width_s: float = Field(default=2.5e-6, gt=0)
    sample_rate_hz: float = Field(default=1e9, gt=0)
    optimizer: OptimizerModel = Field(default_factory=OptimizerModel)
    transform_length: int | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.bandwidth_hz > self.sample_rate_hz:
            raise ValueError("bandwidth must not exceed the sample rate")
        if self.pulse_width_s * self.sample_rate_hz < 8:
            raise ValueError("pulse_width * sample_rate must be at least 8 samples")
        return self


class RunRequest(DesignParameters):
    """Batch request; omitted windows default to all six kinds."""

    windows: list[WindowModel] | None = None
    methods: list[str] = Field(default_factory=lambda: list(METHODS))

    @field_validator("methods")
    @classmethod
    def _methods_valid(cls, v):
        if not v:
            raise ValueError("at least one method is required")
        for m in v:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; valid methods: {', '.join(METHODS)}")
        if len(set(v)) != len(v):
            raise ValueError("duplicate methods")
        return v

    def to_config(self) -> RunConfig:
        windows = self.windows
        if windows is None:
            specs = tuple(WindowSpec(kind) for kind in WINDOW_KINDS)
        else:
            if not windows:
                raise ValueError("at least one window is required")
            specs = tuple(w.to_spec() for w in windows)
        return RunConfig(
            bandwidth_hz=self.bandwidth_hz,
            pulse_width_s=self.pulse_width_s,
            sample_rate_hz=self.sample_rate_hz,
            windows=specs,
            methods=tuple(self.methods),
            optimizer=self.optimizer.to_config(),
            transform_length=self.transform_length,
        )


class DesignRequest(DesignParameters):
    """Single-run request."""

    window: WindowModel
    method: str

    @field_validator("method")
    @classmethod
    def _method_valid(cls, v):
        if v not in METHODS:
            raise ValueError(f"unknown method {v!r}; valid methods: {', '.join(METHODS)}")
        return v


class SignalPayload(BaseModel):
    n: list[int]
    t_s: list[float]
    phase_rad: list[float]
    inst_freq_hz: list[float]
    re: list[float]
    im: list[float]


class AcfPayload(BaseModel):
    lag_s: list[float]
    magnitude_db: list[float]


class SpectrumPayload(BaseModel):
    f_hz: list[float]
    target_mag: list[float]
    achieved_mag: list[float]


class ConvergencePayload(BaseModel):
    iteration: list[int]
    e_min: list[float]
    e_min_normalized: list[float]


class RunSummary(BaseModel):
    window: WindowModel
    method: str
    num_samples: int
    transform_length: int
    band_bins: int
    sample_rate_hz: float
    psl_db: float | None
    psl_status: str | None
    mainlobe_null_width_s: float | None
    version: str
    iterations_run: int | None = None
    stop_reason: str | None = None
    e_min_first: float | None = None
    e_min_last: float | None = None


class RunPayload(BaseModel):
    summary: RunSummary
    signal: SignalPayload
    acf: AcfPayload
    spectrum: SpectrumPayload
    convergence: ConvergencePayload | None = None


class ImprovementEntry(BaseModel):
    window: str
    spm_psl_db: float | None
    pm_psl_db: float | None
    improvement_db: float | None


class PslEntry(BaseModel):
    window: str
    method: str
    psl_db: float | None
    psl_status: str | None
    mainlobe_null_width_s: float | None


class ReportPayload(BaseModel):
    version: str
    config: dict
    psl: list[PslEntry]
    improvements: list[ImprovementEntry]
    mean_improvement_db: float | None
    excluded_windows: list[str]


class BatchPayload(BaseModel):
    runs: list[RunPayload]
    report: ReportPayload


class WindowInfo(BaseModel):
    kind: str
    default_params: dict[str, float]


class HealthPayload(BaseModel):
    status: str
    version: str


def create_app() -> FastAPI:
    app = FastAPI(title="nlfm-design", version=__version__)

    @app.get("/api/v1/health", response_model=HealthPayload)
    def health():
        return HealthPayload(status="ok", version=__version__)

    @app.get("/api/v1/windows", response_model=list[WindowInfo])
    def windows():
        return [
            WindowInfo(kind=kind, default_params=DEFAULT_PARAMS[kind])
            for kind in WINDOW_KINDS
        ]

    @app.post("/api/v1/design", response_model=RunPayload)
    def design(request: DesignRequest):
        config = RunConfig(
            bandwidth_hz=request.bandwidth_hz,
            pulse_width_s=request.pulse_width_s,
            sample_rate_hz=request.sample_rate_hz,
            windows=(request.window.to_spec(),),
            methods=(request.method,),
            optimizer=request.optimizer.to_config(),
            transform_length=request.transform_length,
        )
        try:
            result = execute_run(request.window.to_spec(), request.method, config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return result.payload()

    @app.post("/api/v1/runs", response_model=BatchPayload)
    def runs(request: RunRequest):
        try:
            config = request.to_config()
            batch = execute_batch(config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "runs": [r.payload() for r in batch.runs],
            "report": batch.report(),
        }

    return app


app = create_app()


def main(argv=None) -> int:
    """Console entry point: serve the app with uvicorn."""
    import uvicorn

    parser = argparse.ArgumentParser(
        prog="nlfm-design-server", description="Serve the NLFM waveform design API."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0
