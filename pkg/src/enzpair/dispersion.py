"""Linear dispersion: Drude permittivity, complex index, material wavenumber.

All quantities are SI (rad/s, 1/m, m). Functions accept scalars or numpy
arrays for the frequency argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c

from enzpair.errors import DomainError, NoCrossing


@dataclass(frozen=True)
class DrudeLorentzMaterial:
    """Resonance-free Drude model eps(w) = eps_inf - wp^2 / (w^2 + i w gamma)."""

    eps_inf: float
    omega_p_sq: float  # rad^2 s^-2
    gamma: float  # rad/s

    def __post_init__(self):
        if not self.eps_inf >= 1:
            raise DomainError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if not self.omega_p_sq > 0:
            raise DomainError(f"omega_p_sq must be > 0, got {self.omega_p_sq}")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")

    def eps(self, omega):
        w2g2 = omega * omega + self.gamma * self.gamma
        re = self.eps_inf - self.omega_p_sq / w2g2
        im = self.omega_p_sq * self.gamma / (omega * w2g2)
        return re, im


@dataclass(frozen=True)
class ConstantIndexMaterial:
    """Dispersionless, lossless background of index n0."""

    n0: float

    def __post_init__(self):
        if not self.n0 > 0:
            raise DomainError(f"n0 must be > 0, got {self.n0}")

    def eps(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.full_like(omega, self.n0**2)[()], np.zeros_like(omega)[()]


PRESETS = {
    # Luk et al. 2015 ITO film
    "ito-luk2015": DrudeLorentzMaterial(eps_inf=4.082, omega_p_sq=7.643e30, gamma=1.239e14),
}


def material_preset(name: str) -> DrudeLorentzMaterial:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown material preset {name!r}; known: {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class ComplexPermittivity:
    eps_real: float | np.ndarray
    eps_imag: float | np.ndarray

    @property
    def value(self):
        return self.eps_real + 1j * self.eps_imag


@dataclass(frozen=True)
class RefractiveIndex:
    n_real: float | np.ndarray
    n_imag: float | np.ndarray

    @property
    def value(self):
        return self.n_real + 1j * self.n_imag


@dataclass(frozen=True)
class VacuumMode:
    k: float  # 1/m

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"wavenumber must be > 0, got {self.k}")

    @property
    def omega_vac(self) -> float:
        return c * self.k

    @property
    def lambda_vac(self) -> float:
        return 2 * np.pi / self.k

    @classmethod
    def from_wavelength(cls, lam: float) -> VacuumMode:
        return cls(2 * np.pi / lam)

    @classmethod
    def from_omega(cls, omega: float) -> VacuumMode:
        return cls(omega / c)


def permittivity(material, omega) -> ComplexPermittivity:
    """Rationalized permittivity; raises DomainError for omega <= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("permittivity requires omega > 0")
    re, im = material.eps(omega[()])
    return ComplexPermittivity(re, im)


def refractive_index(eps: ComplexPermittivity) -> RefractiveIndex:
    """Principal square root of the permittivity (n_imag >= 0 for passive media)."""
    if np.any(np.asarray(eps.eps_imag) < 0):
        raise DomainError("refractive_index requires eps_imag >= 0 (passive medium)")
    # +0.0 turns a signed -0.0 imaginary part into +0.0 so eps<0 lands on +i
    z = np.sqrt(np.asarray(eps.eps_real, dtype=float) + 1j * (np.asarray(eps.eps_imag, dtype=float) + 0.0))
    return RefractiveIndex(z.real[()], z.imag[()])


def index_at(material, omega) -> RefractiveIndex:
    return refractive_index(permittivity(material, omega))


def enz_crossing(material) -> float:
    """Exact root of Re eps(w) = 0: sqrt(wp^2/eps_inf - gamma^2)."""
    if not isinstance(material, DrudeLorentzMaterial):
        raise NoCrossing(f"{type(material).__name__} has no permittivity zero crossing")
    arg = material.omega_p_sq / material.eps_inf - material.gamma**2
    if not arg > 0:
        raise NoCrossing("omega_p_sq / eps_inf <= gamma^2: Re eps never crosses zero")
    return float(np.sqrt(arg))


def enz_window(material, threshold: float = 1.0) -> tuple[float, float]:
    """Frequency interval (rad/s) where |Re eps| < threshold.

    The upper edge is inf when eps_inf <= threshold.
    """
    enz_crossing(material)
    lo_sq = material.omega_p_sq / (material.eps_inf + threshold) - material.gamma**2
    lo = float(np.sqrt(lo_sq)) if lo_sq > 0 else 0.0
    if material.eps_inf - threshold <= 0:
        return lo, float("inf")
    hi = float(np.sqrt(material.omega_p_sq / (material.eps_inf - threshold) - material.gamma**2))
    return lo, hi


def material_wavenumber(material, mode: VacuumMode) -> complex:
    """K = k (n_r(ck) + i n_i(ck)), fixed by the unpumped index."""
    n = index_at(material, mode.omega_vac)
    return complex(mode.k * n.n_real, mode.k * n.n_imag)
