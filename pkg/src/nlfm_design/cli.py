"""Batch design driver: a thin client of the design service.

Builds a run request from flags, a JSON config file and defaults
(flags win, then the file, then defaults), submits it to the service
(in process by default, or a remote server via --server), and writes
one directory per (window, method) run:

    signal.csv       n, t_s, phase_rad, inst_freq_hz, re, im
    acf.csv          lag_s, magnitude_db
    spectrum.csv     f_hz, target_mag, achieved_mag
    convergence.csv  iteration, e_min, e_min_normalized   (pm only)
    summary.json

plus a top-level report.json with the PSL table and improvement
figures.  Floats are written with 12 significant digits so identical
configs reproduce byte-identical trees.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys
from pathlib import Path

import httpx
import pydantic

from ._version import __version__
from .pipeline import METHODS
from .service import RunRequest, create_app
from .windows import WINDOW_KINDS

DEFAULT_OUTPUT_DIR = "nlfm-results"
OUT_DIR_ENV_VAR = "NLFM_OUT_DIR"


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlfm-design",
        description="Design NLFM waveforms and measure autocorrelation sidelobes.",
    )
    parser.add_argument("--bandwidth", type=float, help="sweep bandwidth in Hz (default 100e6)")
    parser.add_argument("--pulse-width", type=float, help="pulse width in seconds (default 2.5e-6)")
    parser.add_argument("--sample-rate", type=float, help="sample rate in Hz (default 1e9)")
    parser.add_argument(
        "--windows",
        help=f"comma-separated window kinds (default all: {','.join(WINDOW_KINDS)})",
    )
    parser.add_argument(
        "--methods", help=f"comma-separated methods (default all: {','.join(METHODS)})"
    )
    parser.add_argument("--iterations", type=int, help="refinement iteration cap")
    parser.add_argument("--tolerance", type=float, help="relative error-change stop threshold")
    parser.add_argument("--transform-length", type=int, help="override the transform length K")
    parser.add_argument("--out", help=f"output directory (or ${OUT_DIR_ENV_VAR}; default {DEFAULT_OUTPUT_DIR})")
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--server", help="base URL of a running design service (default: in-process)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must contain a JSON object")
    return data


def _windows_from_names(names: str) -> list[dict]:
    specs = []
    for name in names.split(","):
        name = name.strip()
        if not name:
            continue
        specs.append({"kind": name})
    return specs


def parse_config(argv=None) -> tuple[RunRequest, Path, str | None]:
    """Merge defaults, config file and flags into a validated request.

    Returns the request, the output directory and the optional remote
    server URL.  Raises UsageError (or SystemExit from argparse) on
    invalid input.
    """
    args = build_parser().parse_args(argv)

    merged: dict = {}
    output_dir = None
    if args.config:
        file_cfg = _load_config_file(args.config)
        output_dir = file_cfg.pop("output_dir", None)
        optimizer = file_cfg.pop("optimizer", None)
        if optimizer is not None:
            merged["optimizer"] = optimizer
        windows = file_cfg.pop("windows", None)
        if windows is not None:
            merged["windows"] = [
                {"kind": w} if isinstance(w, str) else w for w in windows
            ]
        merged.update(file_cfg)

    if args.bandwidth is not None:
        merged["bandwidth_hz"] = args.bandwidth
    if args.pulse_width is not None:
        merged["pulse_width_s"] = args.pulse_width
    if args.sample_rate is not None:
        merged["sample_rate_hz"] = args.sample_rate
    if args.windows is not None:
        merged["windows"] = _windows_from_names(args.windows)
    if args.methods is not None:
        merged["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    if args.transform_length is not None:
        merged["transform_length"] = args.transform_length
    if args.iterations is not None or args.tolerance is not None:
        optimizer = dict(merged.get("optimizer") or {})
        if args.iterations is not None:
            optimizer["max_iterations"] = args.iterations
        if args.tolerance is not None:
            optimizer["rel_tolerance"] = args.tolerance
        merged["optimizer"] = optimizer

    try:
        request = RunRequest(**merged)
        request.to_config()
    except (pydantic.ValidationError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc

    out = args.out or output_dir or os.environ.get(OUT_DIR_ENV_VAR) or DEFAULT_OUTPUT_DIR
    return request, Path(out), args.server


async def _post_runs(request: RunRequest, server: str | None) -> dict:
    if server:
        transport = None
        base_url = server
    else:
        transport = httpx.ASGITransport(app=create_app())
        base_url = "http://nlfm-design.local"
    async with httpx.AsyncClient(
        transport=transport, base_url=base_url, timeout=None
    ) as client:
        response = await client.post(
            "/api/v1/runs", json=request.model_dump(mode="json")
        )
        response.raise_for_status()
        return response.json()


def _fmt(value) -> str:
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return f"{value:.12g}"


def _write_csv(path: Path, header: list[str], columns: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _round_floats(obj):
    """Limit floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def _write_json(path: Path, data: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_round_floats(data), fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_run_files(run: dict, run_dir: Path) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    sig = run["signal"]
    _write_csv(
        run_dir / "signal.csv",
        ["n", "t_s", "phase_rad", "inst_freq_hz", "re", "im"],
        [sig["n"], sig["t_s"], sig["phase_rad"], sig["inst_freq_hz"], sig["re"], sig["im"]],
    )
    acf = run["acf"]
    _write_csv(run_dir / "acf.csv", ["lag_s", "magnitude_db"], [acf["lag_s"], acf["magnitude_db"]])
    spec = run["spectrum"]
    _write_csv(
        run_dir / "spectrum.csv",
        ["f_hz", "target_mag", "achieved_mag"],
        [spec["f_hz"], spec["target_mag"], spec["achieved_mag"]],
    )
    conv = run.get("convergence")
    if conv is not None:
        _write_csv(
            run_dir / "convergence.csv",
            ["iteration", "e_min", "e_min_normalized"],
            [conv["iteration"], conv["e_min"], conv["e_min_normalized"]],
        )
    _write_json(run_dir / "summary.json", run["summary"])


def write_output_tree(batch: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for run in batch["runs"]:
        summary = run["summary"]
        name = f"{summary['window']['kind']}_{summary['method']}"
        write_run_files(run, out_dir / name)
    _write_json(out_dir / "report.json", batch["report"])


def main(argv=None) -> int:
    try:
        request, out_dir, server = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        batch = asyncio.run(_post_runs(request, server))
    except httpx.HTTPStatusError as exc:
        detail = exc.response.text
        print(f"error: service rejected the request: {detail}", file=sys.stderr)
        return 2 if exc.response.status_code == 422 else 1
    except httpx.HTTPError as exc:
        print(f"error: cannot reach the design service: {exc}", file=sys.stderr)
        return 1

    try:
        write_output_tree(batch, out_dir)
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return 1

    for entry in batch["report"]["psl"]:
        psl = entry["psl_db"]
        psl_text = f"{psl:.2f} dB" if psl is not None else f"({entry['psl_status']})"
        print(f"{entry['window']:>14} {entry['method']:<3} psl = {psl_text}")
    mean = batch["report"]["mean_improvement_db"]
    if mean is not None:
        print(f"mean improvement = {mean:.2f} dB")
    print(f"results written to {out_dir}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
