"""Constellation construction: PAM baseline and the SER-optimal design.

The optimal design makes every decision boundary sit the same number of
metric standard deviations away from its two neighboring points.  For a
fixed normalized half-gap T the points follow a closed-form recursion, and
the largest T compatible with the unit average-power constraint is found by
bisection; the average power is monotone in T, so the bracket always
contains the solution.
"""

from dataclasses import dataclass

import numpy as np

from .analysis import psi_mean, psi_variance
from .errors import ConvergenceError

__all__ = [
    "Constellation",
    "DecisionRule",
    "DesignContext",
    "OptimizerResult",
    "pam_constellation",
    "pam_thresholds",
    "next_point",
    "quadratic_coeffs",
    "optimize",
    "thresholds_from_T",
    "to_record",
]

POWER_TOL = 1e-3


@dataclass(frozen=True)
class Constellation:
    """K non-negative energy levels under the unit average-power constraint."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise ValueError("energies must be a non-empty 1-d sequence")
        if np.any(e < 0):
            raise ValueError("energies must be non-negative")
        if np.any(np.diff(e) < 0):
            raise ValueError("energies must be non-decreasing")
        if e.mean() > 1.0 + POWER_TOL:
            raise ValueError(f"mean energy {e.mean():.6f} violates the power constraint")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)

    @property
    def K(self):
        return int(self.energies.size)

    @property
    def amplitudes(self):
        return np.sqrt(self.energies)

    @property
    def mean_power(self):
        return float(self.energies.mean())


@dataclass(frozen=True)
class DecisionRule:
    """Contiguous decoding intervals (tre_l[i], tre_r[i]] on the metric axis.

    centers holds the metric means the intervals were built around and
    d_left / d_right the distances from each center to its interval ends;
    edge distances are infinite.
    """

    tre_l: np.ndarray
    tre_r: np.ndarray
    centers: np.ndarray
    d_left: np.ndarray
    d_right: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("tre_l", "tre_r", "centers", "d_left", "d_right"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.setflags(write=False)
            arrays[name] = a
            object.__setattr__(self, name, a)
        k = arrays["centers"].size
        if any(a.size != k for a in arrays.values()):
            raise ValueError("rule field lengths disagree")
        if not np.isneginf(arrays["tre_l"][0]) or not np.isposinf(arrays["tre_r"][-1]):
            raise ValueError("edge intervals must extend to -inf / +inf")
        interior_gap = arrays["tre_l"][1:] - arrays["tre_r"][:-1]
        if np.any(np.abs(interior_gap) > 1e-9):
            raise ValueError("intervals must be contiguous")
        inside = (arrays["centers"] > arrays["tre_l"]) & (arrays["centers"] < arrays["tre_r"])
        if not np.all(inside):
            raise ValueError("each center must lie inside its own interval")

    @property
    def K(self):
        return int(self.centers.size)

    @property
    def boundaries(self):
        """The K-1 finite interior boundaries, ascending."""
        return self.tre_r[:-1]


@dataclass(frozen=True)
class DesignContext:
    """Everything the recursion needs besides the running point energy."""

    M: float
    K: int
    profile: object
    sigma_n_sq: float
    w: float

    @property
    def h0(self):
        return float(self.profile.tap_variances[0])

    @property
    def s_tail(self):
        return float(self.profile.tap_variances[1:].sum())

    @property
    def t_upper(self):
        """Upper end of the valid T range: sqrt(M/2) / (w * h0)."""
        return float(np.sqrt(self.M / 2.0) / (self.w * self.h0))

    def sigma_psi(self, p):
        return float(np.sqrt(psi_variance(p, self.profile, self.sigma_n_sq, self.M, self.K, self.w)))


@dataclass(frozen=True)
class OptimizerResult:
    constellation: Constellation
    t_max: float
    decision_rule: DecisionRule
    iterations: int
    converged: bool


def _rule_from_distances(energies, w, sigma_n_sq, d_left, d_right):
    centers = psi_mean(np.asarray(energies, dtype=float), sigma_n_sq, w)
    dl = np.asarray(d_left, dtype=float).copy()
    dr = np.asarray(d_right, dtype=float).copy()
    dl[0] = np.inf
    dr[-1] = np.inf
    tre_l = centers - dl
    tre_r = centers + dr
    return DecisionRule(tre_l=tre_l, tre_r=tre_r, centers=centers, d_left=dl, d_right=dr)


def pam_constellation(K):
    """Non-negative PAM energies [0, eps, 4 eps, ...] with unit mean power.

    eps = 6 / ((K-1)(2K-1)) makes the mean energy exactly one.
    """
    if int(K) != K or K < 2:
        raise ValueError("K must be an integer >= 2")
    K = int(K)
    eps = 6.0 / ((K - 1) * (2 * K - 1))
    return Constellation(eps * np.arange(K, dtype=float) ** 2)


def pam_thresholds(K, w, sigma_n_sq):
    """Midpoint-in-energy decision rule for the PAM baseline.

    The boundary between points i and i+1 (0-based) sits (2i+1) eps / 2 above
    point i's mean, i.e. exactly halfway between the two energies; shared
    boundaries make the rule contiguous and the edges extend to +-inf.
    """
    const = pam_constellation(K)
    eps = 6.0 / ((K - 1) * (2 * K - 1))
    half_gaps = (2.0 * np.arange(K - 1) + 1.0) * eps / 2.0
    d_right = np.append(half_gaps, np.inf)
    d_left = np.concatenate(([np.inf], half_gaps))
    return _rule_from_distances(const.energies, w, sigma_n_sq, d_left, d_right)


def quadratic_coeffs(T, p_i, ctx):
    """Coefficients (A, B, C) of the gap equation as a quadratic in p_{i+1}.

    Squaring the equal-gap relation p_{i+1} - p_i = sqrt(2) T (s(p_{i+1}) + s(p_i))
    and substituting the variance polynomial gives A p^2 + B p + C = 0; the
    returned closed-form root of next_point() satisfies it to machine precision.
    """
    w, M, K = ctx.w, ctx.M, ctx.K
    h0, s_tail = ctx.h0, ctx.s_tail
    sn2 = ctx.sigma_n_sq
    sig = ctx.sigma_psi(p_i)
    quartic = float((ctx.profile.tap_variances[1:] ** 2).sum())
    cross = s_tail * s_tail - quartic
    A = (w * w * h0 * h0) / M - 1.0 / (2.0 * T * T)
    B = (
        p_i / (T * T)
        + np.sqrt(2.0) * sig / T
        + 2.0 * w * w * h0 * sn2 / M
        + 2.0 * w * w * h0 * s_tail / (M * K)
    )
    C1 = (w * w / M) * (quartic / K**2 + cross / K**2 + 2.0 * s_tail * sn2 / K + sn2 * sn2)
    C2 = (p_i / (np.sqrt(2.0) * T) + sig) ** 2
    return A, B, C1 - C2


def next_point(p_i, T, ctx):
    """Next energy level of the equal-error chain for half-gap T.

    Positive root of the gap quadratic:

        p_{i+1} = [sqrt(2) T (sqrt(M) s(p_i) + w sn2 + (w/K) sum tail) + sqrt(M) p_i]
                  / (sqrt(M) - sqrt(2) T w h0)

    valid for 0 < T < sqrt(M/2)/(w h0), where the denominator stays positive.
    The other root of the quadratic is p_i itself and is never the answer.
    """
    if not 0 < T < ctx.t_upper:
        raise ValueError(f"T={T} outside the valid range (0, {ctx.t_upper:.6g})")
    if p_i < 0:
        raise ValueError("p_i must be non-negative")
    sqrtM = np.sqrt(ctx.M)
    sig = ctx.sigma_psi(p_i)
    num = np.sqrt(2.0) * T * (sqrtM * sig + ctx.w * ctx.sigma_n_sq + ctx.w * ctx.s_tail / ctx.K) + sqrtM * p_i
    den = sqrtM - np.sqrt(2.0) * T * ctx.w * ctx.h0
    return float(num / den)


def _chain(T, ctx, p1):
    p = np.empty(ctx.K)
    p[0] = p1
    for i in range(ctx.K - 1):
        p[i + 1] = next_point(p[i], T, ctx)
    return p


def optimize(K, M, profile, sigma_n_sq, equalizer, tol=POWER_TOL, max_iter=200, p1=0.0):
    """Maximize the common half-gap T by bisection under the power constraint.

    The bracket starts at (0, sqrt(M/2)/(w h0)); each midpoint rebuilds the
    point chain from p1 and the bracket side is chosen by whether the mean
    power exceeds one.  Stops when the bracket or the power residual drops
    below tol; raises ConvergenceError with the last bracket otherwise.
    """
    if int(K) != K or K < 2:
        raise ValueError("K must be an integer >= 2")
    if M < 1:
        raise ValueError("M must be >= 1")
    if not 0.0 <= p1 < 1.0:
        raise ValueError("p1 must lie in [0, 1) to leave power for the remaining points")
    ctx = DesignContext(M=float(M), K=int(K), profile=profile, sigma_n_sq=float(sigma_n_sq), w=float(equalizer.w))
    t_lower, t_upper = 0.0, ctx.t_upper
    p = np.full(int(K), float(p1))
    T = 0.0
    for iteration in range(1, max_iter + 1):
        T = 0.5 * (t_lower + t_upper)
        p = _chain(T, ctx, float(p1))
        mean_power = p.mean()
        if mean_power >= 1.0:
            t_upper = T
        else:
            t_lower = T
        if abs(t_upper - t_lower) < tol or abs(mean_power - 1.0) < tol:
            if mean_power > 1.0 + POWER_TOL:
                # a bracket exit can leave the midpoint marginally infeasible
                # when the power slope exceeds one; the lower edge is feasible
                T = t_lower
                p = _chain(T, ctx, float(p1))
            const = Constellation(p)
            rule = thresholds_from_T(const, T, ctx)
            return OptimizerResult(
                constellation=const,
                t_max=float(T),
                decision_rule=rule,
                iterations=iteration,
                converged=True,
            )
    raise ConvergenceError(
        f"bisection did not converge in {max_iter} iterations "
        f"(bracket [{t_lower:.6g}, {t_upper:.6g}])",
        t_lower=t_lower,
        t_upper=t_upper,
        iterations=max_iter,
    )


def thresholds_from_T(constellation, t_max, ctx):
    """Decision rule of the equal-error design: d_i = sqrt(2) T sigma_psi(p_i).

    Shared boundaries are contiguous by the equal-gap construction; edges
    extend to +-inf.
    """
    p = constellation.energies
    sig = np.array([ctx.sigma_psi(pi) for pi in p])
    d = np.sqrt(2.0) * t_max * sig
    return _rule_from_distances(p, ctx.w, ctx.sigma_n_sq, d.copy(), d.copy())


def to_record(result, ctx, snr_db):
    """Serializable record of an optimized design (the exchange schema)."""
    return {
        "K": result.constellation.K,
        "energies": [float(x) for x in result.constellation.energies],
        "thresholds": [float(x) for x in result.decision_rule.boundaries],
        "t_max": float(result.t_max),
        "M": float(ctx.M),
        "snr_db": float(snr_db),
        "profile": [float(x) for x in ctx.profile.tap_variances],
    }
