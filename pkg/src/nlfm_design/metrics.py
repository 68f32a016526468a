"""Autocorrelation, peak sidelobe level and mainlobe width.

The ACF is evaluated with a zero-padded FFT (power-of-two length
>= 2N), normalized to 0 dB at zero lag.  The mainlobe is bounded by
the first strict local minima on either side of zero lag; the PSL is
the largest magnitude outside it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import next_power_of_two

DB_FLOOR = -300.0

PSL_OK = "ok"
PSL_NO_SIDELOBES = "no_sidelobes"


@dataclass(eq=False)
class AcfResult:
    """Two-sided autocorrelation magnitudes plus sidelobe analysis.

    ``peak_sidelobe_level`` fills the analysis fields; they are None
    until it runs.  ``psl_db`` is -inf with status ``no_sidelobes``
    when the ACF decays monotonically to the ends (an unmodulated
    pulse has no sidelobes).
    """

    lag_samples: np.ndarray
    lag_seconds: np.ndarray
    magnitude_db: np.ndarray
    sample_rate: float
    psl_db: float | None = None
    psl_status: str | None = None
    mainlobe_edges: tuple[int, int] | None = None
    mainlobe_null_width_s: float | None = None

    @property
    def zero_lag_index(self) -> int:
        return (len(self.magnitude_db) - 1) // 2


def autocorrelation(signal: np.ndarray, sample_rate: float = 1.0) -> AcfResult:
    """ACF r(m) = sum_n x(n) conj(x(n-m)) for m = -(N-1)..(N-1).

    Computed by a zero-padded FFT, normalized to the zero-lag peak,
    with the dB magnitude floored at -300 dB.
    """
    signal = np.asarray(signal)
    n = len(signal)
    if n < 2:
        raise ValueError("autocorrelation needs at least 2 samples")
    lfft = next_power_of_two(2 * n)
    spectrum = np.fft.fft(signal, lfft)
    circular = np.fft.ifft(spectrum * np.conj(spectrum))
    # circular[m] = r(m) for m >= 0, circular[L-m] = r(-m).
    acf = np.concatenate([circular[lfft - (n - 1):], circular[:n]])
    magnitude = np.abs(acf) / np.abs(acf[n - 1])
    magnitude_db = 20.0 * np.log10(np.maximum(magnitude, 10.0 ** (DB_FLOOR / 20.0)))
    lags = np.arange(-(n - 1), n)
    return AcfResult(
        lag_samples=lags,
        lag_seconds=lags / sample_rate,
        magnitude_db=magnitude_db,
        sample_rate=sample_rate,
    )


def _first_strict_minimum(mag: np.ndarray, center: int, direction: int) -> int | None:
    """Offset of the first strict local minimum from ``center``."""
    offset = 1
    while True:
        i = center + direction * offset
        prev = i - direction
        nxt = i + direction
        if nxt < 0 or nxt >= len(mag):
            return None
        if mag[i] < mag[prev] and mag[i] < mag[nxt]:
            return offset
        offset += 1


def peak_sidelobe_level(acf: AcfResult) -> float:
    """Largest ACF magnitude (dB) outside the mainlobe.

    The mainlobe spans the first strict local minima either side of
    zero lag; their locations and the null-to-null width are recorded
    on the result.  Returns -inf (status ``no_sidelobes``) when no
    minima exist.
    """
    mag = acf.magnitude_db
    center = acf.zero_lag_index
    left = _first_strict_minimum(mag, center, -1)
    right = _first_strict_minimum(mag, center, +1)
    if left is None or right is None:
        acf.psl_db = float("-inf")
        acf.psl_status = PSL_NO_SIDELOBES
        acf.mainlobe_edges = None
        acf.mainlobe_null_width_s = None
        return acf.psl_db

    sidelobes = np.concatenate([mag[: center - left + 1], mag[center + right:]])
    acf.psl_db = float(np.max(sidelobes))
    acf.psl_status = PSL_OK
    acf.mainlobe_edges = (-left, right)
    acf.mainlobe_null_width_s = (left + right) / acf.sample_rate
    return acf.psl_db


def improvement_report(spm: AcfResult, pm: AcfResult) -> float:
    """PSL delta (dB) of the refined design relative to the baseline.

    Negative means the refinement lowered the sidelobes.  NaN when
    either input carries the no-sidelobes sentinel; aggregation layers
    exclude those.
    """
    for acf in (spm, pm):
        if acf.psl_db is None:
            peak_sidelobe_level(acf)
    if not np.isfinite(spm.psl_db) or not np.isfinite(pm.psl_db):
        return float("nan")
    return pm.psl_db - spm.psl_db
