"""Kerr-driven time dependence of the index and the mode frequency w_k(t)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c

from enzpair.dispersion import (
    ConstantIndexMaterial,
    DrudeLorentzMaterial,
    RefractiveIndex,
    VacuumMode,
    enz_crossing,
    index_at,
)
from enzpair.errors import DegenerateIndex, DomainError

SHAPES = ("sech2", "gaussian")
SCENARIOS = ("nondispersive", "enz_real_only", "enz_full")
FORMS = ("index", "linearized")
DRIVES = ("complex", "real_part")


@dataclass(frozen=True)
class PumpPulse:
    tau: float  # s
    delta_r: float
    delta_i_scale: float = 1.0
    shape: str = "sech2"

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DomainError(f"pulse shape must be one of {SHAPES}, got {self.shape!r}")
        if not self.tau > 0:
            raise DomainError(f"tau must be > 0, got {self.tau}")
        if not self.delta_r >= 0:
            raise DomainError(f"delta_r must be >= 0, got {self.delta_r}")


@dataclass(frozen=True)
class KerrFactors:
    d_real: float | np.ndarray
    d_imag: float | np.ndarray


# Profiles in the dimensionless time u = t / tau. sech^2 is written with
# exp(-2|u|) so it neither overflows nor warns far in the tails.

def _sech2(u):
    e = np.exp(-2.0 * np.abs(u))
    return 4.0 * e / (1.0 + e) ** 2


def _profile(shape, u):
    if shape == "sech2":
        return _sech2(u)
    if shape == "gaussian":
        return np.exp(-u * u)
    if shape == "step":
        return 0.5 * (1.0 + np.tanh(u))
    raise DomainError(f"unknown profile shape {shape!r}")


def _profile_scalar(shape, u):
    """(s, ds/du) for one float u; the integrator hot path."""
    if shape == "sech2":
        e = math.exp(-2.0 * abs(u))
        s = 4.0 * e / (1.0 + e) ** 2
        return s, -2.0 * s * math.tanh(u)
    if shape == "gaussian":
        s = math.exp(-u * u)
        return s, -2.0 * u * s
    if shape == "step":
        e = math.exp(-2.0 * abs(u))
        return 0.5 * (1.0 + math.tanh(u)), 2.0 * e / (1.0 + e) ** 2
    raise DomainError(f"unknown profile shape {shape!r}")


def intensity_profile(pulse: PumpPulse, t):
    """Normalized pump intensity I(t)/I_peak."""
    return _profile(pulse.shape, np.asarray(t, dtype=float) / pulse.tau)[()]


def kerr_factors(n0: RefractiveIndex) -> KerrFactors:
    """Dispersion factors (nr + ni)/|n|^2 and (nr - ni)/|n|^2 of the Kerr index."""
    nr = np.asarray(n0.n_real, dtype=float)
    ni = np.asarray(n0.n_imag, dtype=float)
    mod2 = nr * nr + ni * ni
    if np.any(mod2 == 0):
        raise DegenerateIndex("Kerr factors undefined for n0 = 0")
    return KerrFactors(((nr + ni) / mod2)[()], ((nr - ni) / mod2)[()])


def time_dependent_index(n0: RefractiveIndex, factors: KerrFactors, pulse: PumpPulse, norm: float, t) -> RefractiveIndex:
    if not norm >= 0:
        raise DomainError(f"Kerr normalization must be >= 0, got {norm}")
    s = intensity_profile(pulse, t)
    return RefractiveIndex(
        n0.n_real + norm * factors.d_real * s,
        n0.n_imag + pulse.delta_i_scale * norm * factors.d_imag * s,
    )


def reference_frequency(material) -> float:
    """Frequency at which the Kerr normalization is anchored."""
    if isinstance(material, DrudeLorentzMaterial):
        return enz_crossing(material)
    return 1.0  # dispersionless: any frequency gives the same factors


def normalize_kerr(material, pulse: PumpPulse) -> float:
    """Scale making the peak real-index change at the reference frequency equal delta_r."""
    if pulse.delta_r == 0:
        return 0.0
    d = kerr_factors(index_at(material, reference_frequency(material)))
    return float(pulse.delta_r / d.d_real)


@dataclass(frozen=True)
class FrequencyTrajectory:
    """w(t) = omega_scale * N0 / (N0 + A s(t/tau))  (form "index"), or
    w(t) = omega_scale * sqrt(1 - 2 A s / N0)         (form "linearized").

    With drive "real_part" the mode is driven by Re w(t) only.
    """

    mode: VacuumMode
    K: complex
    omega_scale: float
    n_background: complex
    n_change: complex
    tau: float
    shape: str = "sech2"
    form: str = "index"
    drive: str = "complex"
    kerr_norm: float = 0.0

    def __post_init__(self):
        if self.form not in FORMS:
            raise DomainError(f"form must be one of {FORMS}, got {self.form!r}")
        if self.drive not in DRIVES:
            raise DomainError(f"drive must be one of {DRIVES}, got {self.drive!r}")
        if self.form == "linearized" and (self.n_background.imag or self.n_change.imag):
            raise DomainError("linearized form needs a real background and change")

    def _g(self, s):
        n0, a = self.n_background, self.n_change
        if self.form == "index":
            return n0 / (n0 + a * s)
        return np.sqrt(1.0 - 2.0 * (a / n0).real * s + 0j)

    def omega_of_t(self, t):
        """Complex instantaneous frequency (rad/s); real-valued under drive "real_part"."""
        s = _profile(self.shape, np.asarray(t, dtype=float) / self.tau)
        w = self.omega_scale * self._g(s)
        if self.drive == "real_part":
            w = w.real + 0j
        return np.asarray(w, dtype=complex)[()]

    def omega_and_rate(self, u: float):
        """(w tau, d ln w / du) at dimensionless time u, as complex scalars."""
        s, ds = _profile_scalar(self.shape, u)
        n0, a = self.n_background, self.n_change
        if self.form == "index":
            den = n0 + a * s
            w = self.omega_scale * self.tau * (n0 / den)
            rate = -a * ds / den
        else:
            b = 2.0 * (a / n0).real
            q = 1.0 - b * s
            w = self.omega_scale * self.tau * cmath.sqrt(q)
            rate = -0.5 * b * ds / q
        if self.drive == "real_part":
            wr = w.real
            return complex(wr), complex((w * rate).real / wr)
        return w, rate

    @property
    def omega_initial(self) -> float:
        return float(abs(self.omega_of_t(-np.inf)))

    @property
    def omega_final(self) -> float:
        return float(abs(self.omega_of_t(np.inf)))

    @property
    def omega_asymptotic(self) -> float:
        return self.omega_final

    @property
    def lossless(self) -> bool:
        if self.drive == "real_part":
            return True
        return self.n_background.imag == 0 and self.n_change.imag == 0


def frequency_trajectory(
    material,
    mode: VacuumMode,
    pulse: PumpPulse,
    scenario: str,
    *,
    norm: float | None = None,
    form: str | None = None,
    drive: str = "complex",
) -> FrequencyTrajectory:
    """Assemble w_k(t) for one vacuum mode.

    nondispersive: w = ck / (n0 + delta s) with delta = pulse.delta_r; by default
    the "linearized" form w^2 = (ck/n0)^2 (1 - 2 delta s / n0) is used, which is
    the problem solved exactly by the sech^2 closed form.
    enz_real_only / enz_full: w = cK / (n_r(t) + i n_i(t)), K = k n0(ck).
    """
    if scenario not in SCENARIOS:
        raise DomainError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    if norm is None:
        norm = normalize_kerr(material, pulse)
    ck = c * mode.k

    if scenario == "nondispersive":
        if not isinstance(material, ConstantIndexMaterial):
            raise DomainError("nondispersive scenario needs a ConstantIndexMaterial")
        n0 = material.n0
        delta = norm * float(kerr_factors(RefractiveIndex(n0, 0.0)).d_real)
        return FrequencyTrajectory(
            mode=mode,
            K=complex(mode.k),
            omega_scale=ck / n0,
            n_background=complex(n0),
            n_change=complex(delta),
            tau=pulse.tau,
            shape=pulse.shape,
            form=form or "linearized",
            drive=drive,
            kerr_norm=norm,
        )

    if form not in (None, "index"):
        raise DomainError("dispersive scenarios support only the index form")
    n = index_at(material, ck)
    f = kerr_factors(n)
    if scenario == "enz_real_only":
        n_bg = complex(n.n_real)
        change = complex(norm * f.d_real)
    else:
        n_bg = complex(n.n_real, n.n_imag)
        change = complex(norm * f.d_real, pulse.delta_i_scale * norm * f.d_imag)
    return FrequencyTrajectory(
        mode=mode,
        K=mode.k * n_bg,
        omega_scale=ck,
        n_background=n_bg,
        n_change=change,
        tau=pulse.tau,
        shape=pulse.shape,
        form="index",
        drive=drive,
        kerr_norm=norm,
    )


def quench_trajectory(omega1: float, omega2: float, tau: float) -> FrequencyTrajectory:
    """Smoothed frequency jump omega1 -> omega2 over a tanh ramp of width tau."""
    if not (omega1 > 0 and omega2 > 0):
        raise DomainError("quench frequencies must be > 0")
    return FrequencyTrajectory(
        mode=VacuumMode.from_omega(omega2),
        K=complex(omega2 / c),
        omega_scale=omega1,
        n_background=1.0 + 0j,
        n_change=complex(omega1 / omega2 - 1.0),
        tau=tau,
        shape="step",
        form="index",
    )
