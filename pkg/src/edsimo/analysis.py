"""Closed-form SER expressions and asymptotics for the equalized energy metric.

Everything here evaluates the Gaussian model of the equalized decision
metric psi(t): its mean is p_i + w*sigma_n^2 and its variance is the
quadratic polynomial of psi_variance().  That variance treats the filter
output as a single energy sample scaled by the coefficient sum w, with
interfering symbols entering through 1/K-weighted averages; it is the
canonical variance for every SER formula and for the constellation
optimizer.  exact_psi_variance() replaces the w^2 weight by the sum of
squared taps, which is the per-sample fluctuation weight of the actual
filter; it is a diagnostic, not the canonical model, and the gap between
either closed form and physical Monte Carlo is characterized in the tests.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "PsiStats",
    "psi_mean",
    "psi_variance",
    "exact_psi_variance",
    "psi_stats",
    "zeta",
    "ser_generic",
    "ser_opt_closed_form",
    "ser_pam",
    "AsymptoticReport",
    "log_ser_slope_vs_M",
    "descent_model",
    "descent_derivatives",
    "t_max_error_floor",
    "rate_function_bound",
    "erfc_asymptote",
    "pam_ratio_alpha",
    "pam_critical_boundary_index",
]


@dataclass(frozen=True)
class PsiStats:
    mean: float
    variance: float


def _interference_sums(profile, K):
    """(quartic sum, ordered cross sum) over the interfering taps l >= 1."""
    tail = profile.tap_variances[1:]
    s = float(tail.sum())
    quart = float((tail**2).sum())
    return quart, s * s - quart


def psi_mean(p, sigma_n_sq, w):
    """Mean of the equalized metric given transmit energy p."""
    return p + w * sigma_n_sq


def zeta(p, profile, sigma_n_sq, K):
    """Energy-dependent variance kernel: psi_variance = w^2 * zeta / M exactly.

    Quadratic in p with strictly positive coefficients, so it is strictly
    increasing on p >= 0.
    """
    p = np.asarray(p, dtype=float)
    h0 = float(profile.tap_variances[0])
    s_tail = float(profile.tap_variances[1:].sum())
    quart, cross = _interference_sums(profile, K)
    const = quart / K**2 + cross / K**2 + (2.0 / K) * s_tail * sigma_n_sq + sigma_n_sq**2
    lin = 2.0 * h0 * sigma_n_sq + (2.0 / K) * h0 * s_tail
    out = h0 * h0 * p * p + lin * p + const
    return out if out.ndim else float(out)


def psi_variance(p_i, profile, sigma_n_sq, M, K, w):
    """Variance of the equalized metric under the scalar-w model.

    The five grouped terms: a quadratic in p_i, a linear term with
    2*h0*sigma_n^2 + (2/K)*h0*sum(tail), two 1/K^2 interference sums, and
    the (2/K)*sum(tail)*sigma_n^2 + sigma_n^4 tail.
    """
    return (w * w / M) * zeta(p_i, profile, sigma_n_sq, K)


def exact_psi_variance(p_i, profile, sigma_n_sq, M, K, coeffs):
    """Diagnostic variance variant weighting by sum_j w_j^2 instead of w^2.

    The filter output sums J weighted energy samples; per-sample fluctuations
    add with the squared taps, so this weight is the larger, more physical
    one.  Kept separate from the canonical psi_variance on purpose: the
    optimizer and the closed-form SER chain use the scalar-w model.
    """
    c = np.asarray(coeffs, dtype=float)
    return float(c @ c) / M * zeta(p_i, profile, sigma_n_sq, K)


def psi_stats(p_i, profile, sigma_n_sq, M, K, w):
    return PsiStats(
        mean=psi_mean(p_i, sigma_n_sq, w),
        variance=float(psi_variance(p_i, profile, sigma_n_sq, M, K, w)),
    )


def _sigma_psi(p, profile, sigma_n_sq, M, K, w):
    return np.sqrt(psi_variance(p, profile, sigma_n_sq, M, K, w))


def _erfc_half(d, sigma):
    """erfc(d / (sqrt(2) sigma)) with an infinite distance contributing zero."""
    d = np.asarray(d, dtype=float)
    out = np.zeros_like(d)
    finite = np.isfinite(d)
    out[finite] = special.erfc(d[finite] / (np.sqrt(2.0) * np.asarray(sigma)[finite]))
    return out


def ser_generic(constellation, rule, psi_variances):
    """Average symbol error probability for an arbitrary rule.

    Evaluated as (1/2K) * sum_i [erfc(d_L/(sqrt2 s_i)) + erfc(d_R/(sqrt2 s_i))],
    the complement form of the correct-decision sum; the two are identical
    and the erfc form stays accurate deep in the tails.  Edge distances are
    infinite and contribute nothing.
    """
    sig = np.sqrt(np.asarray(psi_variances, dtype=float))
    K = constellation.K
    if len(sig) != K or len(rule.d_left) != K:
        raise ValueError("psi_variances and rule must match the constellation size")
    tot = _erfc_half(rule.d_left, sig).sum() + _erfc_half(rule.d_right, sig).sum()
    return float(tot / (2.0 * K))


def ser_opt_closed_form(t_max, K):
    """SER of the equal-error design: 1 - ((K-1) erf(T) + 1) / K.

    Computed as (K-1)/K * erfc(T), which is the same expression arranged to
    survive in floating point out to T where erfc underflows.
    """
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    return float((K - 1) / K * special.erfc(t_max))


def ser_pam(K, M, profile, sigma_n_sq, w):
    """Closed-form SER of the unit-power non-negative PAM baseline."""
    from .constellation import pam_constellation, pam_thresholds

    const = pam_constellation(K)
    rule = pam_thresholds(K, w, sigma_n_sq)
    variances = psi_variance(const.energies, profile, sigma_n_sq, M, K, w)
    return ser_generic(const, rule, variances)


@dataclass(frozen=True)
class AsymptoticReport:
    """Large-M behavior of log10 SER for one scheme at one operating point.

    log10 SER ~ slope_vs_M * M - 0.5*log10(M) + intercept, with slope set by
    the scheme's critical boundary; descent_x is that boundary's normalized
    half-gap and t_max_floor its high-SNR limit (infinite for flat channels).
    """

    slope_vs_M: float
    intercept: float
    zeta: float
    t_max_floor: float
    descent_x: float


def log_ser_slope_vs_M(design, K, M, profile, sigma_n_sq, equalizer):
    """Predicted asymptotics in M for design = 'optimal' or 'pam'.

    The slope is -d^2 / (2 w^2 zeta(p)) * log10(e) at the critical boundary:
    the common equal-error baseline for the optimized design, the first
    interior boundary (the minimum-ratio one) for PAM.
    """
    from .constellation import optimize, pam_constellation, pam_thresholds

    w = equalizer.w
    log10e = np.log10(np.e)
    if design == "optimal":
        result = optimize(K, M, profile, sigma_n_sq, equalizer)
        p_crit = float(result.constellation.energies[0])
        d_crit = float(result.decision_rule.d_right[0])
        z = float(zeta(p_crit, profile, sigma_n_sq, K))
        intercept = np.log10(np.sqrt(2.0 / np.pi * z) * (K - 1) * w / (K * d_crit))
    elif design == "pam":
        const = pam_constellation(K)
        rule = pam_thresholds(K, w, sigma_n_sq)
        p_crit = float(const.energies[1])
        d_crit = float(rule.d_left[1])
        z = float(zeta(p_crit, profile, sigma_n_sq, K))
        intercept = np.log10(np.sqrt(z / (2.0 * np.pi)) * w / (K * d_crit))
    else:
        raise ValueError("design must be 'optimal' or 'pam'")
    slope = -(d_crit**2) / (2.0 * w * w * z) * log10e
    sigma_crit = float(_sigma_psi(p_crit, profile, sigma_n_sq, M, K, w))
    x = d_crit / (np.sqrt(2.0) * sigma_crit)
    if profile.L >= 2:
        floor = t_max_error_floor(d_crit, K, M, profile, w)
    else:
        floor = float("inf")
    return AsymptoticReport(
        slope_vs_M=float(slope),
        intercept=float(intercept),
        zeta=z,
        t_max_floor=floor,
        descent_x=float(x),
    )


def descent_model(x):
    """Common descent model of the log-SER terms: D(x) = -x^2 log10(e) - log10(x)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("descent model is defined for x > 0")
    out = -x * x * np.log10(np.e) - np.log10(x)
    return out if out.ndim else float(out)


def descent_derivatives(x):
    """First and second derivatives of the descent model.

    dD/dx = -2x log10(e) - 1/(x ln 10); the second derivative changes sign at
    x = 1/sqrt(2), the steepest-descent crossover.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("descent model is defined for x > 0")
    log10e = np.log10(np.e)
    ln10 = np.log(10.0)
    d1 = -2.0 * x * log10e - 1.0 / (x * ln10)
    d2 = -2.0 * log10e + 1.0 / (x * x * ln10)
    if d1.ndim:
        return d1, d2
    return float(d1), float(d2)


def t_max_error_floor(d_R1, K, M, profile, w):
    """High-SNR limit of the normalized half-gap T for a multipath channel.

    With the noise terms dropped from the variance kernel, the first point's
    kernel collapses to the pure interference constant and

        T_floor = d_R1 * K * sqrt(M) / (w * sqrt(2 * (quart + cross)))

    where quart + cross are the two interference sums.  The sqrt(2) keeps the
    constant consistent with d = sqrt(2) T sigma_psi under that variance.
    Quadrupling M doubles the floor exactly.
    """
    if profile.L < 2:
        raise ValueError("no ISI floor in flat fading")
    quart, cross = _interference_sums(profile, K)
    return float(d_R1 * K * np.sqrt(M) / (w * np.sqrt(2.0 * (quart + cross))))


def rate_function_bound(constellation, rule, k_values, M):
    """Large-deviations upper bound on the flat-fading SER.

    P_U = (1/K) sum_i [exp(-M d_R^2 / (2 k_i)) + exp(-M d_L^2 / (2 k_i))]
    with k_i the per-antenna energy variance at point i (M times the
    flat-fading metric variance).  Infinite edge distances contribute zero.
    """
    k = np.asarray(k_values, dtype=float)
    K = constellation.K
    if len(k) != K:
        raise ValueError("k_values must have one entry per constellation point")
    total = 0.0
    for d_arr in (rule.d_left, rule.d_right):
        finite = np.isfinite(d_arr)
        total += np.exp(-M * d_arr[finite] ** 2 / (2.0 * k[finite])).sum()
    return float(total / K)


def erfc_asymptote(x):
    """Leading tail term exp(-x^2) / (sqrt(pi) x); relative error is ~1/(2x^2)."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-x * x) / (np.sqrt(np.pi) * x)
    return out if out.ndim else float(out)


def pam_ratio_alpha(i, K, profile, sigma_n_sq, M=1.0, w=1.0):
    """Boundary-to-kernel ratio function alpha(i) for the PAM baseline.

    alpha(i) = (w^2 M / D) * (i^2 + i + 1/4) / (i^4 + (E/(D eps)) i^2 + F/(D eps^2))

    with D, E, F the quadratic, linear, and constant coefficients of the
    variance kernel and eps the PAM energy step.  Only ratios across i carry
    meaning; the prefactor scales linearly in M.
    """
    h0 = float(profile.tap_variances[0])
    s_tail = float(profile.tap_variances[1:].sum())
    quart, cross = _interference_sums(profile, K)
    D = h0 * h0
    E = 2.0 * h0 * sigma_n_sq + (2.0 / K) * h0 * s_tail
    F = quart / K**2 + cross / K**2 + (2.0 / K) * s_tail * sigma_n_sq + sigma_n_sq**2
    eps = 6.0 / ((K - 1) * (2 * K - 1))
    num = i * i + i + 0.25
    den = i**4 + (E / (D * eps)) * i**2 + F / (D * eps**2)
    return float(w * w * M / D * num / den)


def pam_critical_boundary_index(K, profile, sigma_n_sq):
    """1-based index i minimizing d_L(i)^2 / zeta(p_i) over the PAM points.

    The first point has no finite left distance, so the scan runs over
    i = 2..K; the returned index is the error-dominating point.
    """
    from .constellation import pam_constellation, pam_thresholds

    const = pam_constellation(K)
    rule = pam_thresholds(K, 1.0, sigma_n_sq)
    ratios = [
        rule.d_left[i] ** 2 / float(zeta(const.energies[i], profile, sigma_n_sq, K))
        for i in range(1, K)
    ]
    return int(np.argmin(ratios)) + 2
