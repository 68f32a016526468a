"""Zero-padded discrete Fourier operators and the design frequency grid.

The analysis operator is the K-point DFT of an N-sample signal,
X(k) = sum_n x(n) exp(-j 2 pi k n / K); its adjoint sums with the
conjugate kernel over the first N indices.  Both are evaluated with
FFTs, which match the defining sums to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def next_power_of_two(n: int) -> int:
    k = 1
    while k < n:
        k *= 2
    return k


@dataclass(frozen=True, eq=False)
class DesignGrid:
    """Time/frequency discretization shared by all design stages.

    N = round(T fs) signal samples at rate fs; a K-point transform
    (K >= 2N); and the ordered list of DFT bins whose baseband
    frequency falls inside [-B/2, +B/2].  Bin k maps to frequency
    k fs/K for k < K/2 and (k-K) fs/K above, so the in-band set wraps
    around the ends of the bin range.
    """

    bandwidth: float
    pulse_width: float
    sample_rate: float
    num_samples: int
    transform_length: int
    in_band_bins: np.ndarray

    @classmethod
    def create(
        cls,
        bandwidth: float,
        pulse_width: float,
        sample_rate: float,
        transform_length: int | None = None,
    ) -> "DesignGrid":
        if bandwidth <= 0 or pulse_width <= 0 or sample_rate <= 0:
            raise ValueError("bandwidth, pulse_width and sample_rate must be positive")
        if bandwidth > sample_rate:
            raise ValueError("bandwidth must not exceed the sample rate")
        n = int(round(pulse_width * sample_rate))
        if n < 2:
            raise ValueError("pulse_width * sample_rate must give at least 2 samples")
        k = transform_length if transform_length is not None else next_power_of_two(2 * n)
        if k < 2 * n:
            raise ValueError(f"transform length {k} must be at least 2N = {2 * n}")

        freqs = cls._frequencies(k, sample_rate)
        half_band = bandwidth / 2.0
        mask = np.abs(freqs) <= half_band
        if np.count_nonzero(mask) % 2 == 0:
            # Band-edge tie: keep -B/2, drop the bin aliased to +B/2.
            if bandwidth == sample_rate:
                mask &= freqs != -sample_rate / 2.0
            else:
                mask &= freqs != half_band
        bins = np.nonzero(mask)[0]
        bins = bins[np.argsort(freqs[bins])]
        if len(bins) < 3:
            raise ValueError("fewer than 3 DFT bins fall inside the design band")
        if len(bins) % 2 == 0:
            raise ValueError("in-band bin count did not resolve to an odd number")
        return cls(
            bandwidth=float(bandwidth),
            pulse_width=float(pulse_width),
            sample_rate=float(sample_rate),
            num_samples=n,
            transform_length=int(k),
            in_band_bins=bins,
        )

    @staticmethod
    def _frequencies(k: int, sample_rate: float) -> np.ndarray:
        idx = np.arange(k)
        return np.where(idx < k / 2, idx, idx - k) * (sample_rate / k)

    @property
    def band_bin_count(self) -> int:
        return len(self.in_band_bins)

    def bin_frequencies(self) -> np.ndarray:
        """Baseband frequency of every transform bin, in Hz."""
        return self._frequencies(self.transform_length, self.sample_rate)

    def in_band_frequencies(self) -> np.ndarray:
        return self.bin_frequencies()[self.in_band_bins]

    def time_grid(self) -> np.ndarray:
        """Sample instants t_n = -T/2 + n/fs, n = 0..N-1."""
        return -self.pulse_width / 2.0 + np.arange(self.num_samples) / self.sample_rate


def forward(signal: np.ndarray, grid: DesignGrid) -> np.ndarray:
    """K-point spectrum of an N-sample signal (zero-padded DFT)."""
    signal = np.asarray(signal)
    if len(signal) != grid.num_samples:
        raise ValueError(
            f"signal length {len(signal)} != grid sample count {grid.num_samples}"
        )
    return np.fft.fft(signal, grid.transform_length)


def adjoint(spectrum: np.ndarray, grid: DesignGrid) -> np.ndarray:
    """Adjoint of :func:`forward`: g(n) = sum_k S(k) exp(+j 2 pi k n / K)."""
    spectrum = np.asarray(spectrum)
    if len(spectrum) != grid.transform_length:
        raise ValueError(
            f"spectrum length {len(spectrum)} != transform length {grid.transform_length}"
        )
    return grid.transform_length * np.fft.ifft(spectrum)[: grid.num_samples]


def band_magnitude(window, grid: DesignGrid) -> np.ndarray:
    """Target spectrum magnitude: the window root placed on the in-band bins.

    The window's lowest index maps to the most negative in-band
    frequency; out-of-band bins are zero.
    """
    if window.size != grid.band_bin_count:
        raise ValueError(
            f"window has {window.size} samples but the grid has "
            f"{grid.band_bin_count} in-band bins"
        )
    if np.any(window.values < 0):
        raise ValueError("window values must be nonnegative")
    target = np.zeros(grid.transform_length)
    target[grid.in_band_bins] = np.sqrt(window.values)
    return target
