"""Closed-form Bogoliubov spectra used as references for the numerical solver."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import c
from scipy.optimize import minimize_scalar

from enzpair.errors import DomainError


@dataclass(frozen=True)
class NondispersiveSetup:
    n0: float
    delta: float
    tau: float  # s
    k: float  # 1/m

    def __post_init__(self):
        if not (self.n0 > 0 and self.tau > 0 and self.k > 0):
            raise DomainError("n0, tau and k must be > 0")
        if not self.delta >= 0:
            raise DomainError("delta must be >= 0")


def _log_sinh(y):
    y = np.asarray(y, dtype=float)
    big = y > 20.0
    out = np.empty_like(y)
    out[big] = y[big] + np.log1p(-np.exp(-2.0 * y[big])) - math.log(2.0)
    out[~big] = np.log(np.sinh(y[~big]))
    return out


def sech2_spectrum(setup: NondispersiveSetup) -> float:
    """|beta_k|^2 for w^2 = (ck/n0)^2 (1 - 2 delta sech^2(t/tau) / n0).

    cos^2((pi/2) sqrt(1 - q)) / sinh^2(pi c k tau / n0), q = 8 c^2 k^2 delta tau^2 / n0^3.
    For q > 1 the cosine continues to cosh.
    """
    return float(sech2_spectrum_array(setup.n0, setup.delta, setup.tau, setup.k))


def sech2_spectrum_array(n0, delta, tau, k):
    k = np.asarray(k, dtype=float)
    if delta == 0:
        return np.zeros_like(k)[()]
    q = 8.0 * c**2 * k**2 * delta * tau**2 / n0**3
    y = math.pi * c * k * tau / n0
    log_num = np.empty_like(q)
    below = q <= 1.0
    # cos((pi/2) sqrt(1-q)) = sin((pi/2) q / (1 + sqrt(1-q))), free of cancellation
    arg = 0.5 * math.pi * q[below] / (1.0 + np.sqrt(1.0 - q[below]))
    log_num[below] = 2.0 * np.log(np.sin(arg))
    log_num[~below] = 2.0 * np.log(np.cosh(0.5 * math.pi * np.sqrt(q[~below] - 1.0)))
    return np.exp(log_num - 2.0 * _log_sinh(y))[()]


def small_delta_spectrum(setup: NondispersiveSetup) -> float:
    """Leading O(delta^2) term: 4 pi^2 c^4 k^4 tau^4 delta^2 / (n0^6 sinh^2(pi c k tau / n0))."""
    s = setup
    if s.delta == 0:
        return 0.0
    y = math.pi * c * s.k * s.tau / s.n0
    log_num = math.log(4 * math.pi**2) + 4 * math.log(c * s.k * s.tau) + 2 * math.log(s.delta) - 6 * math.log(s.n0)
    return float(np.exp(log_num - 2.0 * _log_sinh(y)))


def sech2_peak(setup: NondispersiveSetup) -> tuple[float, float]:
    """Maximize the sech^2 spectrum over k in [0.1, 10] n0/(c tau); setup.k is ignored."""
    if setup.delta > 0.1:
        warnings.warn("sech2_peak assumes delta << 1", stacklevel=2)
    unit = setup.n0 / (c * setup.tau)
    d = setup.delta if setup.delta > 0 else 1e-6  # peak position of the delta -> 0 shape

    def neg_log(x):
        return -math.log(sech2_spectrum_array(setup.n0, d, setup.tau, x * unit))

    opt = minimize_scalar(neg_log, bounds=(0.1, 10.0), method="bounded", options={"xatol": 1e-10})
    k_peak = float(opt.x) * unit
    value = sech2_spectrum(NondispersiveSetup(setup.n0, setup.delta, setup.tau, k_peak))
    return k_peak, value


def sudden_step(omega1: float, omega2: float) -> float:
    """|beta|^2 for an instantaneous jump omega1 -> omega2."""
    if not (omega1 > 0 and omega2 > 0):
        raise DomainError("frequencies must be > 0")
    return (omega2 - omega1) ** 2 / (4.0 * omega1 * omega2)
