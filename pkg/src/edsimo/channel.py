"""Multipath SIMO channel model.

A single-antenna transmitter sends non-negative amplitudes through an
L-tap FIR channel to M receive antennas.  Tap gains are i.i.d. circularly
symmetric complex Gaussians whose per-tap variances are the only channel
knowledge used anywhere else in the library: the receiver never sees the
realizations themselves.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ChannelProfile",
    "NoiseModel",
    "ChannelRealization",
    "make_exponential_profile",
    "draw_channel",
    "draw_noise",
    "apply_channel",
    "transmit",
]


@dataclass(frozen=True)
class ChannelProfile:
    """Per-tap variances sigma^2_{h_l}, known to both ends of the link."""

    tap_variances: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.tap_variances, dtype=float))
        if v.ndim != 1 or v.size < 1:
            raise ValueError("tap_variances must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(v)):
            raise ValueError("tap variances must be finite")
        if np.any(v < 0):
            raise ValueError("tap variances must be non-negative")
        if v[0] <= 0:
            raise ValueError("leading tap variance must be positive")
        if v.sum() <= 0:
            raise ValueError("total channel power must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "tap_variances", v)

    @property
    def L(self):
        return int(self.tap_variances.size)

    @property
    def total_power(self):
        return float(self.tap_variances.sum())


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise level, parameterized by transmit SNR in dB.

    Unit average symbol power is assumed throughout, so
    sigma_n_sq = 10**(-snr_db / 10).
    """

    snr_db: float
    sigma_n_sq: float = field(init=False)

    def __post_init__(self):
        s = 10.0 ** (-float(self.snr_db) / 10.0)
        if not (s > 0 and np.isfinite(s)):
            raise ValueError("snr_db yields a non-positive or non-finite noise variance")
        object.__setattr__(self, "sigma_n_sq", s)


@dataclass(frozen=True)
class ChannelRealization:
    """One block's tap draws, shape (M, L); column l has variance sigma^2_{h_l}."""

    taps: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.taps)
        if t.ndim != 2:
            raise ValueError("taps must be an (M, L) array")
        object.__setattr__(self, "taps", t)

    @property
    def M(self):
        return int(self.taps.shape[0])

    @property
    def L(self):
        return int(self.taps.shape[1])


def make_exponential_profile(L, decay=1.0):
    """Exponentially decaying tap-variance profile, normalized to unit total power.

    tap_variances[l] = c * exp(-decay * l) with c chosen so the variances sum
    to one, which keeps the SNR definition independent of L and decay.
    """
    if int(L) != L or L < 1:
        raise ValueError("L must be a positive integer")
    if not decay > 0:
        raise ValueError("decay must be positive")
    v = np.exp(-decay * np.arange(int(L), dtype=float))
    return ChannelProfile(v / v.sum())


def draw_channel(profile, M, rng):
    """Draw an (M, L) realization with CN(0, sigma^2_{h_l}) entries.

    Deterministic for a given generator state: identical seeds give
    bitwise-identical draws.
    """
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    M = int(M)
    scale = np.sqrt(profile.tap_variances / 2.0)
    taps = (rng.standard_normal((M, profile.L)) + 1j * rng.standard_normal((M, profile.L))) * scale
    return ChannelRealization(taps)


def draw_noise(noise, M, n, rng):
    """Draw an (n, M) array of CN(0, sigma_n_sq) noise vectors."""
    scale = np.sqrt(noise.sigma_n_sq / 2.0)
    return (rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))) * scale


def apply_channel(symbols, channel):
    """Noise-free receive sequence: y(t) = sum_l h_l s(t - l), s(t < 0) = 0.

    Returns an (N, M) array whose row t is the antenna vector at time t.
    """
    s = np.asarray(symbols, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("symbols must be a non-empty 1-d sequence")
    n = s.size
    L = channel.L
    lagged = np.zeros((L, n))
    for l in range(L):
        lagged[l, l:] = s[: n - l]
    return (channel.taps @ lagged).T


def transmit(symbols, channel, noise, rng):
    """Received sequence y(t) = sum_l h_l s(t-l) + n(t) as an (N, M) array.

    Symbols before the sequence start are taken as zero (cold start); the
    simulator discards edge symbols, so the convention never leaks into
    error counts.
    """
    s = np.asarray(symbols, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("symbols must be a non-empty 1-d sequence")
    if np.any(s < 0):
        raise ValueError("symbols must be non-negative amplitudes")
    clean = apply_channel(s, channel)
    return clean + draw_noise(noise, channel.M, s.size, rng)
