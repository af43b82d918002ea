"""ENZ spectra for the real-index and full complex-index models.

Writes one CSV per (scenario, tau) and prints peak positions next to the
|eps'| < 1 window.

    python3 scripts/enz_spectra.py --out runs/enz [--drive real_part]
"""

import argparse
import math
from pathlib import Path

from scipy.constants import c

from enzpair.config import FS, parse_config
from enzpair.dispersion import enz_crossing, enz_window
from enzpair.io import spectrum_csv
from enzpair.spectrum import run_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/enz")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--drive", choices=("complex", "real_part"), default="complex")
    ap.add_argument("--n-points", type=int, default=200)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    peaks = {}
    for preset in ("fig4", "fig5"):
        cfg = parse_config(f"scenario: {{drive: {args.drive}}}\ngrid: {{n_points: {args.n_points}}}\n", preset=preset)
        material = cfg.material_obj()
        for tau in cfg.taus:
            res = run_spectrum(material, cfg.pulse_obj(tau), cfg.scenario.kind, cfg.grid_for(tau),
                               cfg.geometry_obj(), solver=cfg.solver, drive=cfg.scenario.drive, threads=args.threads)
            name = f"{cfg.scenario.kind}_tau{tau / FS:g}fs"
            (out / f"{name}.csv").write_text(spectrum_csv(res, cfg.hash()))
            peaks[(cfg.scenario.kind, tau)] = res.peak()

    w_enz = enz_crossing(material)
    lo, hi = enz_window(material)
    print(f"lambda_ENZ = {2 * math.pi * c / w_enz * 1e9:.1f} nm, "
          f"|eps'| < 1 for {2 * math.pi * c / hi * 1e9:.0f}-{2 * math.pi * c / lo * 1e9:.0f} nm")
    for (kind, tau), p in sorted(peaks.items()):
        print(f"{kind:14s} tau={tau / FS:4g} fs  peak {p.lam * 1e9:7.1f} nm  w/w_ENZ={p.omega / w_enz:.3f}  "
              f"|beta|^2={p.beta_sq:.3e}  N={p.n_photons:.3e}")


if __name__ == "__main__":
    main()
