"""Physical Monte Carlo next to the closed-form chain, honestly.

Runs the full pipeline (draw channel, transmit, collect energies, equalize,
decode) for both schemes on paired randomness and writes the sweep as CSV.
The closed-form chain models the filtered metric as a single Gaussian with a
simplified variance; the physical pipeline carries the filter's full
fluctuation gain and symbol-dependent variance mixing, so measured error
rates sit well above the closed forms.  The optimized design's advantage
over PAM survives in the physical numbers, which is the comparison the
design actually promises.  docs/model-notes.md quantifies the gap.
"""

import pathlib

from edsimo import analysis, design_equalizer, make_exponential_profile
from edsimo.sim import SimConfig, rows_to_csv, run_mc, sweep_antennas

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

base = SimConfig(M=100, K=4, L=4, snr_db=4.0, blocks=120, block_len=1000, seed=2024)

print("paired antenna sweep at 4 dB (closed form vs physical pipeline):")
rows = sweep_antennas(base, [100, 200, 400])
for r in rows:
    print(
        f"  {r.scheme:8s} M={r.M:3d}: closed-form {r.analytic_ser:.3e}   "
        f"measured {r.mc_ser:.3e} [{r.ci_low:.3e}, {r.ci_high:.3e}] over {r.trials} symbols"
    )

csv_path = OUT / "05_antenna_sweep.csv"
csv_path.write_text(rows_to_csv(rows), encoding="utf-8")
print(f"wrote {csv_path}")

# the optimized design keeps beating PAM in the physical pipeline
pam = {r.M: r.mc_ser for r in rows if r.scheme == "pam"}
opt = {r.M: r.mc_ser for r in rows if r.scheme == "optimal"}
for m in sorted(pam):
    print(f"  M={m}: measured SER ratio PAM/optimized = {pam[m] / opt[m]:.2f}")

# the diagnostic variance (squared-tap weighting) explains most of the gap
profile = make_exponential_profile(4, 1.0)
eq = design_equalizer(profile)
p0 = 0.0
canonical = analysis.psi_variance(p0, profile, 10**-0.4, 100, 4, eq.w)
exact = analysis.exact_psi_variance(p0, profile, 10**-0.4, 100, 4, eq.coeffs)
print(
    f"\nvariance at the zero-energy point, M=100, 4 dB: scalar-w model {canonical:.2e}, "
    f"squared-tap diagnostic {exact:.2e} (x{exact / canonical:.2f})"
)

est = run_mc(SimConfig(M=400, K=4, L=4, snr_db=0.0, blocks=60, block_len=1000, seed=7, scheme="optimal"))
print(f"\nspot check, optimized scheme at M=400, 0 dB: measured SER {est.ser:.3e} over {est.trials} symbols")
