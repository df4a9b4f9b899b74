"""Closed-form SER behavior: antenna scaling, the high-SNR floor, tail bounds.

Three views of the analytic chain: log SER falls almost linearly in the
antenna count with the optimized design falling faster; over SNR both
schemes hit an interference floor on a multipath channel while a flat
channel keeps improving; and in flat fading the exact SER sits below the
large-deviations bound.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy import stats

from edsimo import analysis, build_zf, design_equalizer, make_exponential_profile, optimize

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

profile = make_exponential_profile(4, 1.0)
eq = design_equalizer(profile)
K = 4

# ---- SER vs antenna count --------------------------------------------------
ms = np.arange(100, 401, 25)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
for snr, marker in ((0.0, "o"), (6.0, "s")):
    sn2 = 10 ** (-snr / 10)
    pam = [analysis.ser_pam(K, m, profile, sn2, eq.w) for m in ms]
    opt = [analysis.ser_opt_closed_form(optimize(K, m, profile, sn2, eq).t_max, K) for m in ms]
    ax1.semilogy(ms, pam, marker + "--", ms=3, label=f"PAM {snr:g} dB")
    ax1.semilogy(ms, opt, marker + "-", ms=3, label=f"optimized {snr:g} dB")
    fit_pam = stats.linregress(ms, np.log10(pam))
    fit_opt = stats.linregress(ms, np.log10(opt))
    print(f"SNR {snr:g} dB: slope per antenna pam={fit_pam.slope:.5f} (R2={fit_pam.rvalue**2:.4f}), "
          f"optimized={fit_opt.slope:.5f} (R2={fit_opt.rvalue**2:.4f})")
ax1.set_xlabel("antennas M")
ax1.set_ylabel("SER (closed form)")
ax1.set_title("Log SER is almost linear in M")
ax1.legend(fontsize=8)
ax1.grid(True, which="both", alpha=0.3)

# ---- SER vs SNR and the interference floor ---------------------------------
snrs = np.arange(0.0, 42.0, 2.0)
flat = make_exponential_profile(1, 1.0)
eq_flat = build_zf(flat, 1, 1)
pam_isi = [analysis.ser_pam(K, 100, profile, 10 ** (-s / 10), eq.w) for s in snrs]
opt_isi = [analysis.ser_opt_closed_form(optimize(K, 100, profile, 10 ** (-s / 10), eq).t_max, K) for s in snrs]
opt_flat = [analysis.ser_opt_closed_form(optimize(K, 100, flat, 10 ** (-s / 10), eq_flat).t_max, K) for s in snrs]
ax2.semilogy(snrs, pam_isi, "s--", ms=3, label="PAM, 4 taps")
ax2.semilogy(snrs, opt_isi, "o-", ms=3, label="optimized, 4 taps")
ax2.semilogy(snrs, opt_flat, "^-", ms=3, label="optimized, flat")
ax2.set_xlabel("SNR (dB)")
ax2.set_ylabel("SER (closed form)")
ax2.set_title("Interference floor at high SNR (M=100)")
ax2.set_ylim(1e-16, 1)
ax2.legend(fontsize=8)
ax2.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "04_ser_asymptotics.png", dpi=120)

floor_t = analysis.t_max_error_floor(
    float(optimize(K, 100, profile, 1e-4, eq).decision_rule.d_right[0]), K, 100, profile, eq.w
)
print(f"high-SNR margin limit T_floor={floor_t:.3f} -> SER floor {analysis.ser_opt_closed_form(floor_t, K):.2e}")

# ---- flat-fading tail bound -------------------------------------------------
print("\nflat fading, exact SER vs large-deviations bound:")
for M in (50, 100, 200):
    res = optimize(K, M, flat, 1.0, eq_flat)
    var = analysis.psi_variance(res.constellation.energies, flat, 1.0, M, K, eq_flat.w)
    exact = analysis.ser_generic(res.constellation, res.decision_rule, var)
    bound = analysis.rate_function_bound(res.constellation, res.decision_rule, M * var, M)
    print(f"  M={M:4d}: exact={exact:.3e}  bound={bound:.3e}")
print(f"wrote {OUT / '04_ser_asymptotics.png'}")
