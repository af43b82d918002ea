"""Command line entry point: ``enzpair <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy.constants import c

from enzpair import __version__
from enzpair.config import FIGURE_PRESETS, FS, NM, UM, RunConfig, build_config, load_yaml, serialize
from enzpair.dispersion import (
    PRESETS as MATERIAL_PRESETS,
    DrudeLorentzMaterial,
    VacuumMode,
    enz_crossing,
    enz_window,
    permittivity,
    refractive_index,
)
from enzpair.errors import EnzPairError, ParseError, ValidationError
from enzpair.io import dumps, fmt, read_spectrum_csv, sidecar_path, spectrum_csv, spectrum_json
from enzpair.mode_solver import WRONSKIAN_TOL, ModeProblem, solve_mode
from enzpair.modulation import frequency_trajectory, kerr_factors, normalize_kerr
from enzpair.oracle import sech2_spectrum_array
from enzpair.spectrum import (
    EmissionGeometry,
    GridSpec,
    SpectrumResult,
    BETA_SQ_FLOOR,
    SpectrumRow,
    photon_number,
    run_spectrum,
)


def load_run_config(args, overrides: dict | None = None) -> RunConfig:
    doc = {}
    if getattr(args, "config", None):
        doc = load_yaml(Path(args.config).read_text())
    preset = getattr(args, "preset", None)
    if overrides:
        for section, values in overrides.items():
            doc.setdefault(section, {}).update(values)
    return build_config(doc, preset=preset)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sidecar(cfg: RunConfig, result: SpectrumResult) -> dict:
    return {
        "package_version": __version__,
        "config": cfg.to_dict(),
        "config_yaml": serialize(cfg),
        "config_sha256": cfg.hash(),
        "defaults_applied": list(cfg.defaults_applied),
        "run": result.metadata,
    }


def _write_result(cfg: RunConfig, result: SpectrumResult, out: str | None, fmt_: str):
    h = cfg.hash()
    if fmt_ == "json":
        _emit(spectrum_json(result, h), out)
        return
    _emit(spectrum_csv(result, h), out)
    if out:
        sidecar_path(out).write_text(dumps(_sidecar(cfg, result)))


def _run_one(cfg: RunConfig, tau: float, threads: int) -> SpectrumResult:
    res = run_spectrum(
        cfg.material_obj(),
        cfg.pulse_obj(tau),
        cfg.scenario.kind,
        cfg.grid_for(tau),
        cfg.geometry_obj(),
        solver=cfg.solver,
        drive=cfg.scenario.drive,
        form=cfg.scenario.form,
        threads=threads,
        metadata={"tau": tau, "tau_fs": tau / FS},
    )
    return res


# -- subcommands ----------------------------------------------------------------

def cmd_dispersion(args) -> int:
    name = args.preset or "ito-luk2015"
    if args.config:
        material = load_run_config(args).material_obj()
    elif name in MATERIAL_PRESETS:
        material = MATERIAL_PRESETS[name]
    elif name in FIGURE_PRESETS:
        material = build_config({}, preset=name).material_obj()
    else:
        raise ValidationError("preset", f"unknown preset {name!r}")
    grid = GridSpec(args.lambda_min_nm * NM, args.lambda_max_nm * NM, args.n_points, "linear_lambda")
    lam = np.sort(2 * np.pi / grid.wavenumbers())
    omega = 2 * np.pi * c / lam
    eps = permittivity(material, omega)
    n = refractive_index(eps)
    f = kerr_factors(n)
    cols = ["lambda_nm", "omega_rad_per_s", "eps_real", "eps_imag", "n_real", "n_imag", "d_real", "d_imag"]
    lines = [",".join(cols)]
    for row in zip(lam / NM, omega, eps.eps_real, eps.eps_imag, n.n_real, n.n_imag, f.d_real, f.d_imag):
        lines.append(",".join(fmt(float(v)) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    if isinstance(material, DrudeLorentzMaterial):
        w = enz_crossing(material)
        lo, hi = enz_window(material)
        info = {
            "omega_enz_rad_per_s": w,
            "lambda_enz_nm": 2 * math.pi * c / w / NM,
            "enz_window_nm": [2 * math.pi * c / hi / NM if math.isfinite(hi) else 0.0,
                              2 * math.pi * c / lo / NM if lo > 0 else float("inf")],
        }
        if args.out:
            sidecar_path(args.out).write_text(dumps(info))
        else:
            sys.stderr.write(dumps(info))
    return 0


def cmd_spectrum(args) -> int:
    cfg = load_run_config(args)
    tau = args.tau_fs * FS if args.tau_fs is not None else cfg.taus[0]
    res = _run_one(cfg, tau, args.threads)
    _write_result(cfg, res, args.out or cfg.output.path, args.format or cfg.output.format)
    return 0


def cmd_sweep(args) -> int:
    cfg = load_run_config(args)
    out = args.out or cfg.output.path
    fmt_ = args.format or cfg.output.format
    results = [_run_one(cfg, tau, args.threads) for tau in cfg.taus]
    if fmt_ == "json" or not out:
        payload = {
            "config_sha256": cfg.hash(),
            "config": cfg.to_dict(),
            "runs": [json.loads(spectrum_json(r, cfg.hash())) for r in results],
        }
        _emit(dumps(payload), out)
        return 0
    base = Path(out)
    for r in results:
        path = base.with_name(f"{base.stem}_tau{r.metadata['tau_fs']:g}fs{base.suffix or '.csv'}")
        _write_result(cfg, r, str(path), "csv")
    return 0


def cmd_oracle(args) -> int:
    if args.config:
        cfg = load_run_config(args)
        if cfg.scenario.kind != "nondispersive":
            raise ValidationError("scenario.kind", "oracle needs the nondispersive scenario")
        n0, delta, tau = cfg.material.n0, cfg.pulse.delta_r, cfg.taus[0]
        grid, geometry = cfg.grid_for(tau), cfg.geometry_obj()
    else:
        n0, delta, tau = args.n0, args.delta, args.tau_fs * FS
        for key, v in (("n0", n0), ("tau_fs", args.tau_fs)):
            if not v > 0:
                raise ValidationError(key, "must be > 0")
        if delta < 0:
            raise ValidationError("delta", "must be >= 0")
        unit = 1.0 / (c * tau)
        grid = GridSpec.from_k_range(args.kctau_min * unit, args.kctau_max * unit, args.n_points, "linear_k")
        geometry = EmissionGeometry(args.L_um * UM, args.damping_factor)
    ks = grid.wavenumbers()
    beta = sech2_spectrum_array(n0, delta, tau, ks)
    rows = [
        SpectrumRow(float(k), c * k / n0, 2 * math.pi / k, float(b), photon_number(k, float(b), geometry), True)
        for k, b in zip(ks, np.atleast_1d(beta))
    ]
    res = SpectrumResult(rows, {"oracle": "sech2", "n0": n0, "delta": delta, "tau": tau})
    text = spectrum_json(res) if args.format == "json" else spectrum_csv(res)
    _emit(text, args.out)
    return 0


def cmd_photons(args) -> int:
    res, h = read_spectrum_csv(args.input)
    geometry = EmissionGeometry(args.L_um * UM, args.damping_factor)
    rows = [replace(r, n_photons=photon_number(r.k, r.beta_sq, geometry)) for r in res.rows]
    out = SpectrumResult(rows, {"geometry": {"transverse_extent": geometry.transverse_extent,
                                              "damping_factor": geometry.damping_factor}})
    _emit(spectrum_json(out, h) if args.format == "json" else spectrum_csv(out, h), args.out)
    return 0


def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), **detail}


def validate_config(cfg: RunConfig, check_path: str | None = None, threads: int = 1) -> list[dict]:
    """Invariant checks on a config (and optionally a previously written CSV)."""
    checks = []
    material = cfg.material_obj()
    tau = cfg.taus[0]
    grid = cfg.grid_for(tau)
    ks = grid.wavenumbers()
    omega = c * ks
    eps = permittivity(material, omega)
    n = refractive_index(eps)
    back = (n.n_real + 1j * n.n_imag) ** 2
    err = float(np.max(np.abs(back - eps.value) / np.abs(eps.value)))
    checks.append(_check("index_squares_to_permittivity", err <= 1e-12, max_rel_error=err))
    checks.append(_check("passive_medium", np.all(np.asarray(eps.eps_imag) >= 0)))
    if isinstance(material, DrudeLorentzMaterial):
        w = enz_crossing(material)
        lo, hi = permittivity(material, w * (1 - 1e-6)).eps_real, permittivity(material, w * (1 + 1e-6)).eps_real
        checks.append(_check("enz_sign_change", lo < 0 < hi, omega_enz=w))
        n_enz = refractive_index(permittivity(material, w))
        checks.append(_check("enz_equal_index_parts", abs(n_enz.n_real - n_enz.n_imag) <= 1e-10))

    pulse = cfg.pulse_obj(tau)
    norm = normalize_kerr(material, pulse)
    sample = sorted({0, len(ks) // 2, len(ks) - 1})
    for i in sample:
        traj = frequency_trajectory(material, VacuumMode(float(ks[i])), pulse, cfg.scenario.kind,
                                    norm=norm, form=cfg.scenario.form, drive=cfg.scenario.drive)
        s = cfg.solver
        kw = dict(rtol=s.rtol, atol=s.atol, max_steps=s.max_steps, method=s.method)
        r1 = solve_mode(ModeProblem.around_pulse(traj, s.window_factor, **kw))
        tag = f"k={ks[i]:.6g}"
        if traj.lossless:
            checks.append(_check(f"wronskian[{tag}]", r1.wronskian_residual <= WRONSKIAN_TOL,
                                 residual=r1.wronskian_residual))
        if r1.beta_sq >= 1e-25:
            r2 = solve_mode(ModeProblem.around_pulse(traj, 2 * s.window_factor, **kw))
            change = abs(r2.beta_sq / r1.beta_sq - 1)
            checks.append(_check(f"window_doubling[{tag}]", change <= 1e-3, relative_change=change))

    if check_path:
        stored, stored_hash = read_spectrum_csv(check_path)
        checks.append(_check("config_hash_matches", stored_hash == cfg.hash(),
                             stored=stored_hash, expected=cfg.hash()))
        meta_path = sidecar_path(check_path)
        run_tau = tau
        if meta_path.exists():
            run_tau = json.loads(meta_path.read_text())["run"].get("tau", tau)
        rows = stored.rows
        if rows:
            b = np.array([r.beta_sq for r in rows])
            idx = sorted({0, int(np.nanargmax(b)), len(rows) - 1})
            worst = 0.0
            for j in idx:
                row = rows[j]
                traj = frequency_trajectory(material, VacuumMode(row.k), cfg.pulse_obj(run_tau), cfg.scenario.kind,
                                            form=cfg.scenario.form, drive=cfg.scenario.drive)
                s = cfg.solver
                res = solve_mode(ModeProblem.around_pulse(traj, s.window_factor, rtol=s.rtol, atol=s.atol,
                                                          max_steps=s.max_steps, method=s.method))
                value = max(res.beta_sq, BETA_SQ_FLOOR)
                worst = max(worst, abs(value - row.beta_sq) / abs(row.beta_sq))
            checks.append(_check("rows_reproduce", worst <= 1e-12, max_rel_error=worst, rows_checked=len(idx)))
    return checks


def cmd_validate(args) -> int:
    if args.config or args.preset:
        cfg = load_run_config(args)
    elif args.check and sidecar_path(args.check).exists():
        cfg = build_config(load_yaml(json.loads(sidecar_path(args.check).read_text())["config_yaml"]))
    else:
        raise ValidationError("config", "validate needs --config, --preset or --check with a sidecar")
    checks = validate_config(cfg, args.check, args.threads)
    ok = all(c["passed"] for c in checks)
    sys.stdout.write(dumps({"config_sha256": cfg.hash(), "passed": ok, "checks": checks}))
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enzpair", description="Vacuum photon-pair spectra of time-varying media")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="YAML/JSON run configuration")
            p.add_argument("--preset", help="figure preset (fig2, fig4, fig5)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("dispersion", help="permittivity, index and Kerr factors versus wavelength")
    common(p)
    p.add_argument("--lambda-min-nm", type=float, default=800.0)
    p.add_argument("--lambda-max-nm", type=float, default=2400.0)
    p.add_argument("--n-points", type=int, default=200)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("spectrum", help="one spectrum (first configured tau unless --tau-fs)")
    common(p)
    p.add_argument("--tau-fs", type=float)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="one spectrum per configured tau")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="closed-form sech^2 spectrum, same CSV schema")
    common(p)
    p.add_argument("--n0", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--tau-fs", type=float, default=5.0)
    p.add_argument("--kctau-min", type=float, default=0.1)
    p.add_argument("--kctau-max", type=float, default=20.0)
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--L-um", type=float, default=1.0)
    p.add_argument("--damping-factor", type=float, default=math.exp(-2.0))
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("photons", help="recompute n_photons of a beta_sq CSV")
    common(p, config=False)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--L-um", type=float, default=1.0)
    p.add_argument("--damping-factor", type=float, default=math.exp(-2.0))
    p.set_defaults(func=cmd_photons)

    p = sub.add_parser("validate", help="run invariant checks on a config or a written CSV")
    common(p)
    p.add_argument("--check", help="previously written spectrum CSV to reproduce")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnzPairError as exc:
        err = {"error": exc.code, "message": str(exc)}
        if isinstance(exc, ParseError):
            err.update(line=exc.line, column=exc.column)
        if isinstance(exc, ValidationError):
            err.update(key=exc.key, constraint=exc.constraint)
        sys.stderr.write(json.dumps(err) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io_error", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
