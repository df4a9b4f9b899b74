"""Energy-detection receive chain: energy collection, equalization, decoding."""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "energy_metric",
    "EnergyDecomposition",
    "decompose_energy",
    "equalize",
    "aligned_symbol_indices",
    "decode",
]


def energy_metric(received):
    """Average power across antennas: ||y(t)||^2 / M.

    Accepts a single antenna vector or an (..., M) stack and reduces over the
    last axis.
    """
    y = np.asarray(received)
    if y.shape[-1] < 1:
        raise ValueError("need at least one antenna")
    out = np.mean(np.abs(y) ** 2, axis=-1)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class EnergyDecomposition:
    """The five labeled components of one energy sample (diagnostic use only)."""

    desired: float
    isi1: float
    isi2: float
    isi3: float
    noise_component: float

    @property
    def total(self):
        return self.desired + self.isi1 + self.isi2 + self.isi3 + self.noise_component


def decompose_energy(symbols, channel, noise_vec, t):
    """Split z(t) into desired, two interference, one cross, and one noise term.

    Requires full knowledge of the realization, so it only exists for
    validating the Gaussian model: desired carries the current symbol through
    tap 0, isi1 the earlier symbols through their own taps, isi2 the cross
    products between different taps, isi3 the signal-noise cross term, and
    noise_component the pure noise power.  They sum to the energy metric of
    the reconstructed receive vector exactly.
    """
    s = np.asarray(symbols, dtype=float)
    if not 0 <= t < s.size:
        raise ValueError(f"t={t} outside the symbol sequence")
    H = channel.taps
    M, L = H.shape
    n = np.asarray(noise_vec)
    lags = np.array([s[t - l] if t - l >= 0 else 0.0 for l in range(L)])

    desired = float(np.sum(np.abs(H[:, 0]) ** 2) * lags[0] ** 2 / M)
    isi1 = float(sum(np.sum(np.abs(H[:, l]) ** 2) * lags[l] ** 2 for l in range(1, L)) / M)
    isi2 = 0.0
    for l in range(L):
        for lp in range(L):
            if l != lp:
                isi2 += lags[l] * lags[lp] * np.real(np.vdot(H[:, l], H[:, lp]))
    isi2 = float(isi2 / M)
    isi3 = float(2.0 * sum(lags[l] * np.real(np.vdot(H[:, l], n)) for l in range(L)) / M)
    nc = float(np.sum(np.abs(n) ** 2) / M)
    return EnergyDecomposition(desired=desired, isi1=isi1, isi2=isi2, isi3=isi3, noise_component=nc)


def equalize(z_sequence, equalizer):
    """Apply the energy-domain filter along the metric sequence.

    Output slot i combines z[i .. i+J-1]; it estimates the energy of the
    symbol at position i + J - d plus the w-scaled noise offset (see
    aligned_symbol_indices).  Only full windows are produced, so the output
    is len(z) - J + 1 long.
    """
    z = np.asarray(z_sequence, dtype=float)
    if z.size < equalizer.J:
        raise ValueError(f"need at least J={equalizer.J} metric samples, got {z.size}")
    return np.convolve(z, equalizer.coeffs, mode="valid")


def aligned_symbol_indices(num_outputs, equalizer):
    """Symbol position estimated by each equalizer output slot: i + J - d."""
    return np.arange(num_outputs) + equalizer.J - equalizer.d


def decode(psi, rule, constellation):
    """Map metric values to 0-based constellation indices.

    Intervals are half-open on the right, (tre_l, tre_r]: a value exactly on
    a shared boundary decodes to the lower point.  Total on the reals via the
    infinite edge intervals.
    """
    if rule.K != constellation.K:
        raise ValueError("rule and constellation sizes disagree")
    idx = np.searchsorted(rule.boundaries, np.asarray(psi, dtype=float), side="left")
    return idx if np.ndim(psi) else int(idx)
