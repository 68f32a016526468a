"""Spectral window tapers used as design targets for NLFM waveforms.

Six classic tapers are supported: raised-cosine, Taylor, Chebyshev,
Gaussian, Poisson and Kaiser.  A window is sampled on the symmetric
integer grid n = -(M-1)/2 .. +(M-1)/2 (M odd) and peak-normalized; its
square root is the target spectrum magnitude over the design band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

WINDOW_KINDS = (
    "raised-cosine",
    "taylor",
    "chebyshev",
    "gaussian",
    "poisson",
    "kaiser",
)

# Shape-parameter defaults per window kind.
DEFAULT_PARAMS: dict[str, dict[str, float]] = {
    "raised-cosine": {"k": 0.17},
    "taylor": {"eta_db": 88.5, "n_bar": 2},
    "chebyshev": {"alpha": 2.0},
    "gaussian": {"k": 35.51},
    "poisson": {"k": 2.5},
    "kaiser": {"beta": 4.5},
}


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order zero.

    Power series sum_m (x^2/4)^m / (m!)^2, accumulated until the next
    term falls below 1e-16 of the running sum.  Converges for all
    finite x.
    """
    q = x * x / 4.0
    term = 1.0
    total = 1.0
    m = 1
    while term > 1e-16 * total:
        term *= q / (m * m)
        total += term
        m += 1
    return total


def erf(x: float) -> float:
    """Error function (delegates to the C library via ``math.erf``)."""
    return math.erf(x)


def taylor_coefficients(eta_db: float, n_bar: int) -> np.ndarray:
    """Cosine-series coefficients of the Taylor taper.

    Returns the n_bar-1 coefficients F_m of
    w(n) = 1 + sum_m F_m cos(2 pi m n / (M-1)), derived from the
    modified zero locations for a design sidelobe ratio of
    10^(eta_db/20).  With n_bar = 2 only F_1 is nonzero.
    """
    if n_bar < 1:
        raise ValueError("n_bar must be >= 1")
    ratio = 10.0 ** (eta_db / 20.0)
    a = math.acosh(ratio) / math.pi
    sigma2 = n_bar**2 / (a**2 + (n_bar - 0.5) ** 2)
    coeffs = np.zeros(max(n_bar - 1, 0))
    for m in range(1, n_bar):
        num = 1.0
        for k in range(1, n_bar):
            num *= 1.0 - m**2 / (sigma2 * (a**2 + (k - 0.5) ** 2))
        den = 1.0
        for k in range(1, n_bar):
            if k != m:
                den *= 1.0 - m**2 / k**2
        coeffs[m - 1] = (-1.0) ** (m + 1) * num / den
    return coeffs


@dataclass(frozen=True)
class WindowSpec:
    """A window kind plus its shape parameters.

    Unspecified parameters take the per-kind defaults.  Parameter
    values must be strictly positive; n_bar must be an integer >= 1.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(
                f"unknown window kind {self.kind!r}; valid kinds: {', '.join(WINDOW_KINDS)}"
            )
        allowed = DEFAULT_PARAMS[self.kind]
        for name, value in self.params.items():
            if name not in allowed:
                raise ValueError(
                    f"unknown parameter {name!r} for {self.kind}; "
                    f"expected one of: {', '.join(allowed)}"
                )
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{self.kind} parameter {name!r} must be positive")
        if self.kind == "taylor":
            n_bar = self.params.get("n_bar", allowed["n_bar"])
            if n_bar < 1 or n_bar != int(n_bar):
                raise ValueError("taylor n_bar must be an integer >= 1")

    def param(self, name: str) -> float:
        return float(self.params.get(name, DEFAULT_PARAMS[self.kind][name]))

    def resolved_params(self) -> dict[str, float]:
        return {name: self.param(name) for name in DEFAULT_PARAMS[self.kind]}


@dataclass(frozen=True, eq=False)
class SampledWindow:
    """Window values on the symmetric grid n = -(M-1)/2 .. (M-1)/2."""

    values: np.ndarray
    peak_normalized: bool = True

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def indices(self) -> np.ndarray:
        m = self.size
        return np.arange(m) - (m - 1) // 2


def _chebyshev_polynomial(order: int, y: np.ndarray) -> np.ndarray:
    """T_order(y) for |y| <= 1 and beyond via the cosh extension."""
    out = np.empty_like(y)
    hi = y > 1.0
    lo = y < -1.0
    mid = ~(hi | lo)
    out[mid] = np.cos(order * np.arccos(y[mid]))
    out[hi] = np.cosh(order * np.arccosh(y[hi]))
    out[lo] = (-1.0) ** order * np.cosh(order * np.arccosh(-y[lo]))
    return out


def chebyshev_dft_coefficients(alpha: float, m_points: int) -> np.ndarray:
    """Equiripple DFT-domain coefficients of the Chebyshev taper.

    W(m) = T_order(beta cos(pi m / M)) / ratio with ratio = 10^alpha,
    beta chosen so the peak equals the ratio.  order = M-1 keeps the
    coefficients even-symmetric for odd M, which makes the inverse DFT
    real.
    """
    ratio = 10.0**alpha
    order = m_points - 1
    beta = math.cosh(math.acosh(ratio) / order)
    m = np.arange(m_points)
    return _chebyshev_polynomial(order, beta * np.cos(np.pi * m / m_points)) / ratio


def _chebyshev_window(alpha: float, m_points: int) -> np.ndarray:
    coeffs = chebyshev_dft_coefficients(alpha, m_points)
    full = np.fft.ifft(coeffs) * m_points
    idx = (np.arange(m_points) - (m_points - 1) // 2) % m_points
    centered = full[idx]
    peak = np.max(np.abs(centered.real))
    residue = np.max(np.abs(centered.imag))
    if residue >= 1e-9 * peak:
        raise RuntimeError(
            f"chebyshev inverse DFT left an imaginary residue of {residue:.3e} "
            f"(threshold {1e-9 * peak:.3e}); window is internally inconsistent"
        )
    return centered.real


def evaluate_window(spec: WindowSpec, m_points: int) -> SampledWindow:
    """Sample the taper for ``spec`` on an M-point symmetric grid.

    M must be odd and >= 3 so the grid contains n = 0.  The result is
    peak-normalized to 1.
    """
    if m_points < 3:
        raise ValueError("window needs at least 3 points")
    if m_points % 2 == 0:
        raise ValueError("window length must be odd so the grid contains n = 0")

    n = np.arange(m_points) - (m_points - 1) / 2.0
    if spec.kind == "raised-cosine":
        k = spec.param("k")
        values = k + (1.0 - k) * np.cos(np.pi * n / (m_points - 1)) ** 2
    elif spec.kind == "taylor":
        coeffs = taylor_coefficients(spec.param("eta_db"), int(spec.param("n_bar")))
        values = np.ones(m_points)
        for m, f_m in enumerate(coeffs, start=1):
            values += f_m * np.cos(2.0 * np.pi * m * n / (m_points - 1))
    elif spec.kind == "chebyshev":
        values = _chebyshev_window(spec.param("alpha"), m_points)
    elif spec.kind == "gaussian":
        k = spec.param("k")
        values = np.exp(-k * (n / (2.0 * (m_points - 1))) ** 2)
    elif spec.kind == "poisson":
        k = spec.param("k")
        values = np.exp(-k * np.abs(n) / (m_points - 1))
    elif spec.kind == "kaiser":
        beta = spec.param("beta")
        arg = beta * np.sqrt(np.maximum(0.0, 1.0 - (n / (m_points / 2.0)) ** 2))
        values = np.array([bessel_i0(a) for a in arg]) / bessel_i0(beta)
    else:  # pragma: no cover - guarded by WindowSpec
        raise ValueError(spec.kind)

    return SampledWindow(values=values / np.max(values))
