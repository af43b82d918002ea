"""Peak |beta|^2 of the ENZ real-index model over the nondispersive baseline, versus delta_r.

    python3 scripts/enhancement.py --tau-fs 5 --delta-r 0.5 1 2 3
"""

import argparse
import math

from enzpair.config import FS
from enzpair.dispersion import ConstantIndexMaterial, enz_window, material_preset
from enzpair.modulation import PumpPulse
from enzpair.spectrum import GridSpec, enhancement_ratio, run_spectrum
from scipy.constants import c


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tau-fs", type=float, default=5.0)
    ap.add_argument("--delta-r", type=float, nargs="+", default=[1.0])
    ap.add_argument("--baseline-delta", type=float, default=1e-3)
    args = ap.parse_args()
    tau = args.tau_fs * FS

    unit = 1 / (c * tau)
    base = run_spectrum(ConstantIndexMaterial(1.0), PumpPulse(tau, args.baseline_delta), "nondispersive",
                        GridSpec.from_k_range(0.1 * unit, 20 * unit, 200))
    ito = material_preset("ito-luk2015")
    lo, hi = enz_window(ito)
    window = (2 * math.pi * c / hi, 2 * math.pi * c / lo)
    base_win = run_spectrum(ConstantIndexMaterial(1.0), PumpPulse(tau, args.baseline_delta), "nondispersive",
                            GridSpec(window[0], window[1], 40))
    for dr in args.delta_r:
        enz = run_spectrum(ito, PumpPulse(tau, dr), "enz_real_only", GridSpec(1250e-9, 1600e-9, 71))
        print(f"delta_r={dr:g}  ENZ peak {enz.peak().beta_sq:.3e} at {enz.peak().lam * 1e9:.0f} nm  "
              f"ratio to baseline peak {enhancement_ratio(enz, base):.3g}  "
              f"ratio inside the ENZ window {enhancement_ratio(enz, base_win):.3g}")


if __name__ == "__main__":
    main()
