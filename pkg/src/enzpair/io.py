"""CSV/JSON serialization of spectra. Floats use 17 significant digits."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from enzpair.spectrum import SpectrumResult, SpectrumRow

COLUMNS = ("k_per_m", "omega_rad_per_s", "lambda_nm", "beta_sq", "n_photons", "converged")
HASH_PREFIX = "# config_sha256: "


def fmt(x: float) -> str:
    return format(x, ".17g")


def spectrum_csv(result: SpectrumResult, config_hash: str | None = None) -> str:
    buf = io.StringIO()
    if config_hash:
        buf.write(f"{HASH_PREFIX}{config_hash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in result.rows:
        w.writerow([fmt(r.k), fmt(r.omega), fmt(r.lam * 1e9), fmt(r.beta_sq), fmt(r.n_photons), int(r.converged)])
    return buf.getvalue()


def read_spectrum_csv(path) -> tuple[SpectrumResult, str | None]:
    """Inverse of spectrum_csv; returns the rows and the embedded config hash."""
    text = Path(path).read_text()
    lines = text.splitlines()
    config_hash = None
    body = []
    for line in lines:
        if line.startswith(HASH_PREFIX):
            config_hash = line[len(HASH_PREFIX):].strip()
        elif not line.startswith("#"):
            body.append(line)
    rows = []
    for rec in csv.DictReader(body):
        rows.append(SpectrumRow(
            k=float(rec["k_per_m"]),
            omega=float(rec["omega_rad_per_s"]),
            lam=float(rec["lambda_nm"]) * 1e-9,
            beta_sq=float(rec["beta_sq"]),
            n_photons=float(rec["n_photons"]),
            converged=rec["converged"].strip() in ("1", "true", "True"),
        ))
    return SpectrumResult(rows), config_hash


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def spectrum_json(result: SpectrumResult, config_hash: str | None = None) -> str:
    rows = [dict(zip(COLUMNS, (r.k, r.omega, r.lam * 1e9, r.beta_sq, r.n_photons, r.converged))) for r in result.rows]
    return dumps({"config_sha256": config_hash, "metadata": result.metadata, "rows": rows})


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")
