"""Spectral sweeps over vacuum wavenumber, tau sweeps and photon-number bookkeeping."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.constants import c

from enzpair.dispersion import VacuumMode
from enzpair.errors import DomainError, EmptySpectrum, EnzPairError
from enzpair.mode_solver import METHODS, ModeProblem, solve_mode
from enzpair.modulation import PumpPulse, frequency_trajectory, normalize_kerr

SPACINGS = ("linear_lambda", "linear_k", "log_k")
BETA_SQ_FLOOR = 1e-30


@dataclass(frozen=True)
class GridSpec:
    lambda_min: float  # m
    lambda_max: float  # m
    n_points: int
    spacing: str = "linear_lambda"

    def __post_init__(self):
        if not 0 < self.lambda_min < self.lambda_max:
            raise DomainError("grid needs 0 < lambda_min < lambda_max")
        if self.n_points < 2:
            raise DomainError("grid needs n_points >= 2")
        if self.spacing not in SPACINGS:
            raise DomainError(f"spacing must be one of {SPACINGS}, got {self.spacing!r}")

    @classmethod
    def from_k_range(cls, k_min: float, k_max: float, n_points: int, spacing: str = "linear_k") -> GridSpec:
        return cls(2 * math.pi / k_max, 2 * math.pi / k_min, n_points, spacing)

    def wavenumbers(self) -> np.ndarray:
        """Grid points as vacuum wavenumbers (1/m), ascending."""
        k_lo, k_hi = 2 * math.pi / self.lambda_max, 2 * math.pi / self.lambda_min
        if self.spacing == "linear_lambda":
            k = 2 * math.pi / np.linspace(self.lambda_min, self.lambda_max, self.n_points)
        elif self.spacing == "linear_k":
            k = np.linspace(k_lo, k_hi, self.n_points)
        else:
            k = np.geomspace(k_lo, k_hi, self.n_points)
        return np.sort(k)


@dataclass(frozen=True)
class EmissionGeometry:
    transverse_extent: float = 1e-6  # m
    damping_factor: float = math.exp(-2.0)
    dimension: int = 2

    def __post_init__(self):
        if not self.transverse_extent > 0:
            raise DomainError("transverse_extent must be > 0")
        if not 0 < self.damping_factor <= 1:
            raise DomainError("damping_factor must lie in (0, 1]")
        if self.dimension != 2:
            raise DomainError("only the two-dimensional emission plane is supported")


@dataclass(frozen=True)
class SolverSettings:
    rtol: float = 1e-10
    atol: float = 1e-14
    window_factor: float = 25.0
    max_steps: int = 1_000_000
    method: str = "adiabatic"

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"solver method must be one of {METHODS}")


@dataclass(frozen=True)
class SpectrumRow:
    k: float
    omega: float
    lam: float
    beta_sq: float
    n_photons: float
    converged: bool


@dataclass
class SpectrumResult:
    rows: list[SpectrumRow]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def peak(self) -> SpectrumRow:
        if not self.rows:
            raise EmptySpectrum("spectrum has no rows")
        b = self.column("beta_sq")
        if np.all(np.isnan(b)):
            raise EmptySpectrum("spectrum has no finite rows")
        return self.rows[int(np.nanargmax(b))]


def photon_number(k: float, beta_sq: float, geometry: EmissionGeometry) -> float:
    """Photons per pulse: ring phase space 2 pi k, area pi L^2, propagation damping."""
    if not k > 0:
        raise DomainError("k must be > 0")
    return 2 * math.pi * k * math.pi * geometry.transverse_extent**2 * geometry.damping_factor * beta_sq


@dataclass(frozen=True)
class _Job:
    material: object
    pulse: PumpPulse
    scenario: str
    norm: float
    solver: SolverSettings
    geometry: EmissionGeometry
    drive: str
    form: str | None


def _solve_row(job: _Job, k: float) -> tuple[SpectrumRow, bool, str | None]:
    mode = VacuumMode(float(k))
    try:
        traj = frequency_trajectory(
            job.material, mode, job.pulse, job.scenario, norm=job.norm, form=job.form, drive=job.drive
        )
        s = job.solver
        problem = ModeProblem.around_pulse(
            traj, s.window_factor, rtol=s.rtol, atol=s.atol, max_steps=s.max_steps, method=s.method
        )
        res = solve_mode(problem)
        omega = traj.omega_asymptotic
        raw, ok, err = res.beta_sq, res.converged, None
    except EnzPairError as exc:
        omega, raw, ok, err = c * mode.k, math.nan, False, f"{type(exc).__name__}: {exc}"
    floored = raw < BETA_SQ_FLOOR
    beta_sq = max(raw, BETA_SQ_FLOOR) if not math.isnan(raw) else raw
    row = SpectrumRow(
        k=float(k),
        omega=float(omega),
        lam=2 * math.pi / float(k),
        beta_sq=beta_sq,
        n_photons=photon_number(mode.k, beta_sq, job.geometry),
        converged=bool(ok),
    )
    return row, floored, err


def _solve_row_star(args):
    return _solve_row(*args)


def run_spectrum(
    material,
    pulse: PumpPulse,
    scenario: str,
    grid: GridSpec,
    geometry: EmissionGeometry | None = None,
    *,
    solver: SolverSettings | None = None,
    drive: str = "complex",
    form: str | None = None,
    threads: int = 1,
    metadata: dict | None = None,
) -> SpectrumResult:
    """Solve every grid mode; failures are flagged per row and never abort the sweep."""
    geometry = geometry or EmissionGeometry()
    solver = solver or SolverSettings()
    norm = normalize_kerr(material, pulse)
    job = _Job(material, pulse, scenario, norm, solver, geometry, drive, form)
    ks = grid.wavenumbers()
    tasks = [(job, float(k)) for k in ks]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(_solve_row_star, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    else:
        out = [_solve_row(*t) for t in tasks]
    out.sort(key=lambda o: o[0].k)
    rows = [o[0] for o in out]
    errors = {f"{o[0].k:.17g}": o[2] for o in out if o[2]}
    meta = {
        "scenario": scenario,
        "material": {"type": type(material).__name__, **asdict(material)},
        "pulse": asdict(pulse),
        "grid": asdict(grid),
        "geometry": asdict(geometry),
        "solver": asdict(solver),
        "drive": drive,
        "form": form or ("linearized" if scenario == "nondispersive" else "index"),
        "kerr_norm": norm,
        "beta_sq_floor": BETA_SQ_FLOOR,
        "n_floored": sum(1 for o in out if o[1]),
        "n_failed": sum(1 for r in rows if not r.converged),
        "errors": errors,
    }
    meta.update(metadata or {})
    return SpectrumResult(rows, meta)


def tau_sweep(material, pulse: PumpPulse, scenario: str, grid, taus, geometry=None, **kwargs) -> list[SpectrumResult]:
    """One run_spectrum per rise time; ``grid`` is a GridSpec or a callable tau -> GridSpec."""
    results = []
    for tau in taus:
        p = PumpPulse(tau=tau, delta_r=pulse.delta_r, delta_i_scale=pulse.delta_i_scale, shape=pulse.shape)
        g = grid(tau) if callable(grid) else grid
        res = run_spectrum(material, p, scenario, g, geometry, **kwargs)
        res.metadata["tau"] = tau
        results.append(res)
    return results


def enhancement_ratio(enz_result: SpectrumResult, baseline: SpectrumResult, baseline_window=None) -> float:
    """max |beta|^2 of ``enz_result`` over max |beta|^2 of ``baseline``.

    ``baseline_window`` = (lambda_lo, lambda_hi) in m restricts the baseline rows.
    """
    top = enz_result.peak().beta_sq
    rows = baseline.rows
    if baseline_window is not None:
        lo, hi = baseline_window
        rows = [r for r in rows if lo <= r.lam <= hi]
    return top / SpectrumResult(rows).peak().beta_sq
