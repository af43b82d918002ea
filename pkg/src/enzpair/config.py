"""Run configuration: YAML parsing, validation, presets and canonical serialization.

Human-facing units (nm, fs, um) stop here; everything handed on is SI.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import yaml
from scipy.constants import c

from enzpair.dispersion import ConstantIndexMaterial, DrudeLorentzMaterial, PRESETS as MATERIAL_PRESETS
from enzpair.errors import DomainError, ParseError, ValidationError
from enzpair.modulation import DRIVES, FORMS, SCENARIOS, SHAPES, PumpPulse
from enzpair.spectrum import SPACINGS, EmissionGeometry, GridSpec, SolverSettings
from enzpair.mode_solver import METHODS

FS = 1e-15
NM = 1e-9
UM = 1e-6

FIGURE_PRESETS = {
    "fig2": {
        "scenario": {"kind": "nondispersive"},
        "material": {"n0": 1.0},
        "pulse": {"tau_fs": [2.0, 5.0, 20.0], "delta_r": 1e-3},
    },
    "fig4": {
        "scenario": {"kind": "enz_real_only"},
        "material": {"preset": "ito-luk2015"},
        "pulse": {"tau_fs": [2.0, 5.0, 20.0], "delta_r": 1.0},
    },
    "fig5": {
        "scenario": {"kind": "enz_full"},
        "material": {"preset": "ito-luk2015"},
        "pulse": {"tau_fs": [2.0, 5.0, 20.0], "delta_r": 1.0},
    },
}

_KEYS = {
    "material": {"preset", "eps_inf", "omega_p_sq", "gamma", "n0"},
    "pulse": {"shape", "tau_fs", "delta_r", "delta_i_scale"},
    "scenario": {"kind", "drive", "form"},
    "grid": {"lambda_min_nm", "lambda_max_nm", "kctau_min", "kctau_max", "n_points", "spacing"},
    "solver": {"rtol", "atol", "window_factor", "max_steps", "method"},
    "geometry": {"L_um", "damping_factor"},
    "output": {"path", "format"},
}


@dataclass(frozen=True)
class MaterialConfig:
    preset: str | None = None
    eps_inf: float | None = None
    omega_p_sq: float | None = None
    gamma: float | None = None
    n0: float | None = None


@dataclass(frozen=True)
class PulseConfig:
    tau_fs: tuple[float, ...] = (5.0,)
    delta_r: float = 1.0
    delta_i_scale: float = 1.0
    shape: str = "sech2"


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    drive: str = "complex"
    form: str | None = None


@dataclass(frozen=True)
class GridConfig:
    n_points: int = 200
    spacing: str = "linear_lambda"
    lambda_min_nm: float | None = None
    lambda_max_nm: float | None = None
    kctau_min: float | None = None
    kctau_max: float | None = None


@dataclass(frozen=True)
class GeometryConfig:
    L_um: float = 1.0
    damping_factor: float = math.exp(-2.0)


@dataclass(frozen=True)
class OutputConfig:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    material: MaterialConfig
    pulse: PulseConfig
    scenario: ScenarioConfig
    grid: GridConfig
    solver: SolverSettings
    geometry: GeometryConfig
    output: OutputConfig
    defaults_applied: tuple[str, ...] = field(default=(), compare=False)

    # -- derived SI objects -------------------------------------------------

    def material_obj(self):
        m = self.material
        if m.n0 is not None:
            return ConstantIndexMaterial(m.n0)
        if m.preset is not None:
            return MATERIAL_PRESETS[m.preset]
        return DrudeLorentzMaterial(m.eps_inf, m.omega_p_sq, m.gamma)

    @property
    def taus(self) -> list[float]:
        return [t * FS for t in self.pulse.tau_fs]

    def pulse_obj(self, tau: float | None = None) -> PumpPulse:
        p = self.pulse
        return PumpPulse(tau=tau if tau is not None else self.taus[0], delta_r=p.delta_r,
                         delta_i_scale=p.delta_i_scale, shape=p.shape)

    def grid_for(self, tau: float) -> GridSpec:
        g = self.grid
        if g.kctau_min is not None:
            unit = 1.0 / (c * tau)
            return GridSpec.from_k_range(g.kctau_min * unit, g.kctau_max * unit, g.n_points, g.spacing)
        return GridSpec(g.lambda_min_nm * NM, g.lambda_max_nm * NM, g.n_points, g.spacing)

    def geometry_obj(self) -> EmissionGeometry:
        return EmissionGeometry(self.geometry.L_um * UM, self.geometry.damping_factor)

    def to_dict(self) -> dict:
        return {
            "material": _drop_none(asdict(self.material)),
            "pulse": {**asdict(self.pulse), "tau_fs": list(self.pulse.tau_fs)},
            "scenario": _drop_none(asdict(self.scenario)),
            "grid": _drop_none(asdict(self.grid)),
            "solver": asdict(self.solver),
            "geometry": asdict(self.geometry),
            "output": _drop_none(asdict(self.output)),
        }

    def hash(self) -> str:
        """sha256 of the physics-relevant sections (output location excluded)."""
        d = self.to_dict()
        d.pop("output")
        canon = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def _drop_none(d):
    return {k: v for k, v in d.items() if v is not None}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


# -- value checkers -----------------------------------------------------------

def _num(key, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(key, f"must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ValidationError(key, "must be finite")
    return float(v)


def _pos(key, v):
    v = _num(key, v)
    if not v > 0:
        raise ValidationError(key, f"must be > 0, got {v}")
    return v


def _choice(key, v, options):
    if v not in options:
        raise ValidationError(key, f"must be one of {list(options)}, got {v!r}")
    return v


def _int(key, v, minimum):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(key, f"must be an integer, got {v!r}")
    if v < minimum:
        raise ValidationError(key, f"must be >= {minimum}, got {v}")
    return v


def load_yaml(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(f"malformed config: {getattr(exc, 'problem', exc)}", line, col) from None
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ParseError("config document must be a mapping")
    return doc


def parse_config(text: str, preset: str | None = None) -> RunConfig:
    """Parse a YAML (or JSON) document into a validated RunConfig."""
    return build_config(load_yaml(text), preset=preset)


def build_config(doc: dict, preset: str | None = None) -> RunConfig:
    doc = dict(doc)
    name = doc.pop("preset", None) or preset
    if name is not None:
        if name not in FIGURE_PRESETS:
            raise ValidationError("preset", f"must be one of {sorted(FIGURE_PRESETS)}, got {name!r}")
        doc = _merge(FIGURE_PRESETS[name], doc)

    for section, value in doc.items():
        if section not in _KEYS:
            raise ValidationError(section, "unknown section")
        if not isinstance(value, dict):
            raise ValidationError(section, "must be a mapping")
        for key in value:
            if key not in _KEYS[section]:
                raise ValidationError(f"{section}.{key}", "unknown key")

    applied: list[str] = []

    def get(section, key, default):
        sec = doc.get(section, {})
        if key in sec:
            return sec[key]
        applied.append(f"{section}.{key}")
        return default

    # scenario
    sc = doc.get("scenario", {})
    if "kind" not in sc:
        raise ValidationError("scenario.kind", "required")
    kind = _choice("scenario.kind", sc["kind"], SCENARIOS)
    nondisp = kind == "nondispersive"
    drive = _choice("scenario.drive", get("scenario", "drive", "complex"), DRIVES)
    form = sc.get("form")
    if form is not None:
        _choice("scenario.form", form, FORMS)
        if not nondisp and form != "index":
            raise ValidationError("scenario.form", "dispersive scenarios support only 'index'")
    scenario = ScenarioConfig(kind, drive, form)

    # material
    m = doc.get("material", {})
    if nondisp:
        if set(m) - {"n0"}:
            raise ValidationError("material", "nondispersive scenario takes only material.n0")
        material = MaterialConfig(n0=_pos("material.n0", get("material", "n0", 1.0)))
    else:
        if "n0" in m:
            raise ValidationError("material.n0", "only valid for the nondispersive scenario")
        explicit = {"eps_inf", "omega_p_sq", "gamma"} & set(m)
        if "preset" in m and explicit:
            raise ValidationError("material", "give either preset or explicit parameters, not both")
        if explicit:
            missing = {"eps_inf", "omega_p_sq", "gamma"} - explicit
            if missing:
                raise ValidationError(f"material.{sorted(missing)[0]}", "required with explicit parameters")
            eps_inf = _num("material.eps_inf", m["eps_inf"])
            if eps_inf < 1:
                raise ValidationError("material.eps_inf", f"must be >= 1, got {eps_inf}")
            wp2 = _pos("material.omega_p_sq", m["omega_p_sq"])
            gamma = _num("material.gamma", m["gamma"])
            if gamma < 0:
                raise ValidationError("material.gamma", f"must be >= 0, got {gamma}")
            material = MaterialConfig(eps_inf=eps_inf, omega_p_sq=wp2, gamma=gamma)
        else:
            name = _choice("material.preset", get("material", "preset", "ito-luk2015"), MATERIAL_PRESETS)
            material = MaterialConfig(preset=name)

    # pulse
    taus = get("pulse", "tau_fs", [5.0])
    if not isinstance(taus, list):
        taus = [taus]
    if not taus:
        raise ValidationError("pulse.tau_fs", "must not be empty")
    taus = tuple(_pos("pulse.tau_fs", t) for t in taus)
    delta_r = _num("pulse.delta_r", get("pulse", "delta_r", 1e-3 if nondisp else 1.0))
    if delta_r < 0:
        raise ValidationError("pulse.delta_r", f"must be >= 0, got {delta_r}")
    pulse = PulseConfig(
        tau_fs=taus,
        delta_r=delta_r,
        delta_i_scale=_num("pulse.delta_i_scale", get("pulse", "delta_i_scale", 1.0)),
        shape=_choice("pulse.shape", get("pulse", "shape", "sech2"), SHAPES),
    )

    # grid
    g = doc.get("grid", {})
    has_lam = {"lambda_min_nm", "lambda_max_nm"} & set(g)
    has_k = {"kctau_min", "kctau_max"} & set(g)
    if has_lam and has_k:
        raise ValidationError("grid", "give either lambda_*_nm or kctau_* bounds, not both")
    use_k = bool(has_k) or (nondisp and not has_lam)
    n_points = _int("grid.n_points", get("grid", "n_points", 200), 2)
    spacing = _choice("grid.spacing", get("grid", "spacing", "linear_k" if use_k else "linear_lambda"), SPACINGS)
    if use_k:
        lo = _pos("grid.kctau_min", get("grid", "kctau_min", 0.1))
        hi = _pos("grid.kctau_max", get("grid", "kctau_max", 20.0))
        if not lo < hi:
            raise ValidationError("grid.kctau_max", "must exceed grid.kctau_min")
        grid = GridConfig(n_points, spacing, kctau_min=lo, kctau_max=hi)
    else:
        lo = _pos("grid.lambda_min_nm", get("grid", "lambda_min_nm", 800.0))
        hi = _pos("grid.lambda_max_nm", get("grid", "lambda_max_nm", 2400.0))
        if not lo < hi:
            raise ValidationError("grid.lambda_max_nm", "must exceed grid.lambda_min_nm")
        grid = GridConfig(n_points, spacing, lambda_min_nm=lo, lambda_max_nm=hi)

    # solver
    dflt = SolverSettings()
    window = _num("solver.window_factor", get("solver", "window_factor", dflt.window_factor))
    if window < 20:
        raise ValidationError("solver.window_factor", f"must be >= 20, got {window}")
    solver = SolverSettings(
        rtol=_pos("solver.rtol", get("solver", "rtol", dflt.rtol)),
        atol=_pos("solver.atol", get("solver", "atol", dflt.atol)),
        window_factor=window,
        max_steps=_int("solver.max_steps", get("solver", "max_steps", dflt.max_steps), 1),
        method=_choice("solver.method", get("solver", "method", dflt.method), METHODS),
    )

    # geometry
    damping = _num("geometry.damping_factor", get("geometry", "damping_factor", math.exp(-2.0)))
    if not 0 < damping <= 1:
        raise ValidationError("geometry.damping_factor", f"must lie in (0, 1], got {damping}")
    geometry = GeometryConfig(_pos("geometry.L_um", get("geometry", "L_um", 1.0)), damping)

    # output
    o = doc.get("output", {})
    path = o.get("path")
    if path is not None and not isinstance(path, str):
        raise ValidationError("output.path", "must be a string")
    output = OutputConfig(path, _choice("output.format", get("output", "format", "csv"), ("csv", "json")))

    cfg = RunConfig(material, pulse, scenario, grid, solver, geometry, output, tuple(applied))
    try:  # final cross-check through the domain constructors
        cfg.material_obj()
        for tau in cfg.taus:
            cfg.pulse_obj(tau)
            cfg.grid_for(tau)
        cfg.geometry_obj()
    except DomainError as exc:
        raise ValidationError("config", str(exc)) from None
    return cfg


def serialize(config: RunConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=True)
