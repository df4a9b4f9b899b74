"""Channel model walkthrough: tap profiles, seeded draws, and the energy metric.

Shows that the per-symbol energy averaged across a large array concentrates
around a value set by the channel statistics alone, which is what lets the
receiver decode without ever estimating the channel.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy import stats

from edsimo import draw_channel, make_exponential_profile, transmit
from edsimo.channel import NoiseModel
from edsimo.receiver import energy_metric

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

profile = make_exponential_profile(L=4, decay=1.0)
print("4-tap exponential profile (unit total power):", np.round(profile.tap_variances, 4))

rng = np.random.default_rng(42)
noise = NoiseModel(snr_db=4.0)

# ---- law of large numbers on the tap draws -------------------------------
ch = draw_channel(profile, M=20000, rng=rng)
sample_var = np.mean(np.abs(ch.taps) ** 2, axis=0)
print("per-tap sample variance at M=20000:", np.round(sample_var, 4))

# ---- energy metric distribution at M = 100 -------------------------------
# fix the transmitted context and draw many independent (channel, noise) pairs
M = 100
s_ctx = np.array([1.069, 0.535, 1.604, 0.0])  # three recent symbols + a zero
v = float(profile.tap_variances @ s_ctx**2 + noise.sigma_n_sq)
zs = np.empty(20000)
for i in range(zs.size):
    c = draw_channel(profile, M, rng)
    y = transmit(s_ctx[::-1], c, noise, rng)
    zs[i] = energy_metric(y[-1])

ks = stats.kstest(zs, "norm", args=(v, v / np.sqrt(M)))
print(f"energy metric: sample mean {zs.mean():.4f} vs predicted {v:.4f}")
print(f"KS distance to the moment-matched normal: {ks.statistic:.4f}")

fig, ax = plt.subplots(figsize=(7, 4))
ax.hist(zs, bins=80, density=True, alpha=0.6, label="simulated z(t)")
grid = np.linspace(zs.min(), zs.max(), 400)
ax.plot(grid, stats.norm.pdf(grid, v, v / np.sqrt(M)), "r-", lw=2, label="Gaussian model")
ax.set_xlabel("per-symbol energy z(t)")
ax.set_ylabel("density")
ax.set_title(f"Energy metric vs Gaussian model (M={M}, KS={ks.statistic:.3f})")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "01_energy_metric_distribution.png", dpi=120)
print(f"wrote {OUT / '01_energy_metric_distribution.png'}")
