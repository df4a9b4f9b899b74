"""Monte Carlo link engine and experiment runners.

Blocks are independent, individually seeded work units: block b of a run
seeded with s draws its channel, noise, and symbol indices from the child
stream (s, b) in a fixed order, so results are reproducible, blocks can be
scheduled in any order, and both schemes of a paired comparison consume
identical draws.  Aggregation is an order-insensitive sum of (errors,
trials).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, receiver
from .channel import NoiseModel, apply_channel, draw_channel, draw_noise, make_exponential_profile
from .constellation import optimize, pam_constellation, pam_thresholds
from .equalizer import build_zf, default_equalizer_length, select_delay
from .errors import SearchExhaustedError

__all__ = [
    "SimConfig",
    "SerEstimate",
    "SweepRow",
    "FindAntennasResult",
    "scheme_design",
    "analytic_ser",
    "run_mc",
    "sweep_antennas",
    "sweep_snr",
    "find_min_antennas",
    "rows_to_csv",
]

#: Minimum trials before the early-stop rule may fire.
TRIALS_FLOOR = 100_000

SCHEMES = ("pam", "optimal")


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo operating point.

    block_len symbols share a channel realization; the first and last
    J + L - 2 symbols of each block are discarded because their convolution
    and filter windows are only partially filled.
    """

    M: int
    K: int = 4
    L: int = 4
    decay: float = 1.0
    snr_db: float = 0.0
    scheme: str = "pam"
    block_len: int = 1000
    blocks: int = 1000
    seed: int = 0
    J: int = None
    max_symbols: int = None
    min_errors: int = 100

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.M < 1 or self.K < 2 or self.L < 1:
            raise ValueError("need M >= 1, K >= 2, L >= 1")
        if self.min_errors < 50:
            raise ValueError("min_errors below 50 gives unusable confidence intervals")
        if self.block_len <= self.resolved_J + self.L:
            raise ValueError(
                f"block_len={self.block_len} leaves no interior symbols "
                f"(need > J + L = {self.resolved_J + self.L})"
            )

    @property
    def resolved_J(self):
        return self.J if self.J is not None else default_equalizer_length(self.L)

    @property
    def edge_discard(self):
        return self.resolved_J + self.L - 2

    def profile(self):
        return make_exponential_profile(self.L, self.decay)

    def noise(self):
        return NoiseModel(self.snr_db)


@dataclass(frozen=True)
class SerEstimate:
    errors: int
    trials: int
    ser: float
    ci95_low: float
    ci95_high: float


def _estimate(errors, trials):
    p = errors / trials
    # normal-approximation 95% CI with a 1/(2n) continuity floor on the width
    half = 1.96 * math.sqrt(p * (1.0 - p) / trials) + 0.5 / trials
    return SerEstimate(
        errors=int(errors),
        trials=int(trials),
        ser=p,
        ci95_low=max(0.0, p - half),
        ci95_high=min(1.0, p + half),
    )


def _equalizer_for(profile, J):
    return build_zf(profile, J, select_delay(profile, J))


def scheme_design(config, profile=None, eq=None):
    """(constellation, rule, analytic SER) for the config's scheme."""
    profile = profile if profile is not None else config.profile()
    eq = eq if eq is not None else _equalizer_for(profile, config.resolved_J)
    sn2 = config.noise().sigma_n_sq
    if config.scheme == "pam":
        const = pam_constellation(config.K)
        rule = pam_thresholds(config.K, eq.w, sn2)
    else:
        result = optimize(config.K, config.M, profile, sn2, eq)
        const, rule = result.constellation, result.decision_rule
    variances = analysis.psi_variance(const.energies, profile, sn2, config.M, config.K, eq.w)
    return const, rule, analysis.ser_generic(const, rule, variances)


def analytic_ser(config):
    """Closed-form SER at the config's operating point."""
    return scheme_design(config)[2]


def _block_rng(seed, block_index):
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block_index,)))


def _simulate_block(config, block_index, profile, noise, eq, amplitudes, rule, const):
    """(errors, trials) on the interior symbols of one block.

    Draw order is fixed (channel, noise, indices) and independent of the
    scheme, so paired runs see identical randomness.
    """
    rng = _block_rng(config.seed, block_index)
    ch = draw_channel(profile, config.M, rng)
    noise_mat = draw_noise(noise, config.M, config.block_len, rng)
    idx = rng.integers(0, config.K, config.block_len)

    y = apply_channel(amplitudes[idx], ch) + noise_mat
    z = receiver.energy_metric(y)
    psi = receiver.equalize(z, eq)
    decided = receiver.decode(psi, rule, const)
    sym = receiver.aligned_symbol_indices(psi.size, eq)

    edge = config.edge_discard
    keep = (sym >= edge) & (sym <= config.block_len - 1 - edge)
    errors = int(np.count_nonzero(decided[keep] != idx[sym[keep]]))
    return errors, int(np.count_nonzero(keep))


def run_mc(config):
    """Monte Carlo SER estimate at one operating point.

    Runs up to config.blocks blocks, stopping early once max_symbols interior
    trials are reached, or once min_errors errors have accumulated over at
    least TRIALS_FLOOR trials.  Deterministic for a fixed config.
    """
    profile = config.profile()
    noise = config.noise()
    eq = _equalizer_for(profile, config.resolved_J)
    const, rule, _ = scheme_design(config, profile, eq)
    amplitudes = const.amplitudes

    cap = config.max_symbols if config.max_symbols is not None else math.inf
    floor = min(TRIALS_FLOOR, cap)
    errors = 0
    trials = 0
    for b in range(config.blocks):
        e, t = _simulate_block(config, b, profile, noise, eq, amplitudes, rule, const)
        errors += e
        trials += t
        if trials >= cap:
            break
        if errors >= config.min_errors and trials >= floor:
            break
    if trials == 0:
        raise ValueError("no interior symbols were simulated")
    return _estimate(errors, trials)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    M: int
    K: int
    L: int
    snr_db: float
    analytic_ser: float
    mc_ser: float
    ci_low: float
    ci_high: float
    trials: int


CSV_COLUMNS = ("scheme", "M", "K", "L", "snr_db", "analytic_ser", "mc_ser", "ci_low", "ci_high", "trials")


def _row(config):
    a = analytic_ser(config)
    est = run_mc(config)
    return SweepRow(
        scheme=config.scheme,
        M=config.M,
        K=config.K,
        L=config.L,
        snr_db=config.snr_db,
        analytic_ser=a,
        mc_ser=est.ser,
        ci_low=est.ci95_low,
        ci_high=est.ci95_high,
        trials=est.trials,
    )


def sweep_antennas(base, m_values):
    """Paired analytic/empirical SER rows over antenna counts, both schemes."""
    return [
        _row(replace(base, scheme=scheme, M=int(m)))
        for scheme in SCHEMES
        for m in m_values
    ]


def sweep_snr(base, snr_values):
    """Paired analytic/empirical SER rows over SNR points, both schemes."""
    return [
        _row(replace(base, scheme=scheme, snr_db=float(s)))
        for scheme in SCHEMES
        for s in snr_values
    ]


def rows_to_csv(rows, footer_lines=()):
    """Header + comma-separated rows, LF endings; footer lines start with '#'."""
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(
            f"{r.scheme},{r.M},{r.K},{r.L},{r.snr_db:.10g},{r.analytic_ser:.10e},"
            f"{r.mc_ser:.10e},{r.ci_low:.10e},{r.ci_high:.10e},{r.trials}"
        )
    lines.extend(f"# {line}" for line in footer_lines)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FindAntennasResult:
    M: int
    analytic_ser: float
    confirmation: SerEstimate


def find_min_antennas(target_ser, snr_db, scheme, base, m_start=25, m_stop=2000, m_step=25):
    """Smallest antenna count on a step grid whose analytic SER meets target.

    The search is purely analytic (fast); the returned grid point is then
    spot-confirmed with one Monte Carlo run at the base config's budget.
    """
    if not 0.0 < target_ser < 1.0:
        raise ValueError("target_ser must be in (0, 1)")
    profile = make_exponential_profile(base.L, base.decay)
    eq = _equalizer_for(profile, base.resolved_J)
    for m in range(m_start, m_stop + 1, m_step):
        config = replace(base, M=m, scheme=scheme, snr_db=snr_db)
        a = scheme_design(config, profile, eq)[2]
        if a <= target_ser:
            return FindAntennasResult(M=m, analytic_ser=a, confirmation=run_mc(config))
    raise SearchExhaustedError(
        f"no antenna count up to {m_stop} reaches SER {target_ser:.3g} "
        f"at {snr_db} dB with scheme {scheme}"
    )
