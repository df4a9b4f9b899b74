"""Statistics-based ZF equalizer for the energy-domain sequence.

The mean of the per-symbol energy metric is the symbol-energy sequence
convolved with the tap-variance profile (plus a noise offset).  A length-J
filter therefore deconvolves in expectation: its coefficients solve

    minimize || w G - e_d ||_2

where G is the banded Toeplitz matrix carrying the profile on its rows and
e_d selects which symbol position the filter recovers.  The solve uses the
normal equations with the SPD Gram matrix G G^T; the normal-equations
residual is zero to machine precision, while the deconvolution residual
w G - e_d decays with J at a profile-dependent geometric rate (it cannot
vanish for a finite filter unless L = 1).
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import NumericalError

__all__ = [
    "Equalizer",
    "build_G",
    "build_zf",
    "select_delay",
    "default_equalizer_length",
    "design_equalizer",
]

#: Condition-number ceiling for the Gram solve; above this the coefficients
#: are untrustworthy and an explicit failure beats silent garbage.
COND_LIMIT = 1e12


@dataclass(frozen=True)
class Equalizer:
    """Energy-domain ZF filter.

    coeffs : the J filter taps w^ZF
    w      : exact coefficient sum (scales the noise offset of the output)
    d      : 1-based recovered position within the J+L-1 symbol window
    J      : filter length
    """

    coeffs: np.ndarray
    w: float
    d: int
    J: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def noise_gain(self):
        """Sum of squared taps; the exact fluctuation weight of the filter."""
        return float(np.dot(self.coeffs, self.coeffs))


def build_G(profile, J):
    """Banded Toeplitz (J, J+L-1): row j carries the profile starting at column j."""
    if int(J) != J or J < 1:
        raise ValueError("J must be a positive integer")
    J = int(J)
    v = profile.tap_variances
    L = v.size
    G = np.zeros((J, J + L - 1))
    for j in range(J):
        G[j, j : j + L] = v
    return G


def _solve_normal(G, d, cond_limit):
    """Least-squares w for w G = e_d via the SPD Gram system (G G^T) w = G[:, d-1]."""
    B = G @ G.T
    cond = float(np.linalg.cond(B))
    if not np.isfinite(cond) or cond > cond_limit:
        raise NumericalError(
            f"Gram matrix of the convolution operator is ill-conditioned "
            f"(condition estimate {cond:.3e} exceeds {cond_limit:.1e})"
        )
    c, low = linalg.cho_factor(B, lower=False)
    return linalg.cho_solve((c, low), G[:, d - 1])


def build_zf(profile, J, d, cond_limit=COND_LIMIT):
    """Build the length-J equalizer recovering window position d (1-based).

    Requires J >= L so the filter has at least as many taps as the channel;
    raises NumericalError when the Gram solve is ill-conditioned.
    """
    J = int(J)
    L = profile.L
    if J < L:
        raise ValueError(f"equalizer length J={J} must be >= channel length L={L}")
    if not 1 <= d <= J + L - 1:
        raise ValueError(f"delay d={d} outside 1..{J + L - 1}")
    G = build_G(profile, J)
    coeffs = _solve_normal(G, int(d), cond_limit)
    return Equalizer(coeffs=coeffs, w=float(coeffs.sum()), d=int(d), J=J)


def select_delay(profile, J):
    """Pick the recovery delay d in 1..J+L-1 for a length-J equalizer.

    Among delays achieving the (near-)minimal deconvolution residual, the
    one with the smallest squared coefficient norm wins: the residual filter
    keeps only delays the filter can actually invert, and the norm then
    minimizes fluctuation amplification.  Ties break toward smaller d.
    """
    J = int(J)
    L = profile.L
    if J < L:
        raise ValueError(f"equalizer length J={J} must be >= channel length L={L}")
    G = build_G(profile, J)
    n_cols = J + L - 1
    resid = np.empty(n_cols)
    norms = np.empty(n_cols)
    for d in range(1, n_cols + 1):
        w = _solve_normal(G, d, COND_LIMIT)
        e = np.zeros(n_cols)
        e[d - 1] = 1.0
        resid[d - 1] = np.linalg.norm(w @ G - e)
        norms[d - 1] = w @ w
    r_min = resid.min()
    ok = resid <= r_min * (1.0 + 1e-9) + 1e-12
    candidates = np.nonzero(ok)[0]
    best = candidates[np.argmin(norms[candidates])]
    return int(best) + 1


def default_equalizer_length(L):
    """Default J = 4(L-1) + 1: identity for flat channels, 13 taps for L = 4."""
    return 4 * (int(L) - 1) + 1


def design_equalizer(profile, J=None):
    """Convenience wrapper: default length, automatic delay selection."""
    if J is None:
        J = default_equalizer_length(profile.L)
    d = select_delay(profile, J)
    return build_zf(profile, J, d)
