"""Energy-detection massive SIMO over ISI channels.

Library layout:

- channel:       FIR multipath model, tap-variance profiles, seeded draws
- equalizer:     statistics-based ZF filter on the energy sequence
- constellation: PAM baseline and the equal-error optimal design
- receiver:      energy collection, filtering, threshold decoding
- analysis:      closed-form SER, asymptotics, error floor, tail bounds
- sim:           Monte Carlo engine, sweeps, minimum-antenna search
- cli:           command-line front end over all of the above
"""

__version__ = "0.1.0"

from .channel import (
    ChannelProfile,
    ChannelRealization,
    NoiseModel,
    draw_channel,
    make_exponential_profile,
    transmit,
)
from .constellation import (
    Constellation,
    DecisionRule,
    DesignContext,
    OptimizerResult,
    optimize,
    pam_constellation,
    pam_thresholds,
)
from .equalizer import Equalizer, build_G, build_zf, design_equalizer, select_delay
from .errors import ConvergenceError, NumericalError, SearchExhaustedError
from .receiver import decode, decompose_energy, energy_metric, equalize
from .sim import SerEstimate, SimConfig, find_min_antennas, run_mc, sweep_antennas, sweep_snr

__all__ = [
    "__version__",
    "ChannelProfile",
    "ChannelRealization",
    "NoiseModel",
    "draw_channel",
    "make_exponential_profile",
    "transmit",
    "Constellation",
    "DecisionRule",
    "DesignContext",
    "OptimizerResult",
    "optimize",
    "pam_constellation",
    "pam_thresholds",
    "Equalizer",
    "build_G",
    "build_zf",
    "design_equalizer",
    "select_delay",
    "ConvergenceError",
    "NumericalError",
    "SearchExhaustedError",
    "decode",
    "decompose_energy",
    "energy_metric",
    "equalize",
    "SerEstimate",
    "SimConfig",
    "find_min_antennas",
    "run_mc",
    "sweep_antennas",
    "sweep_snr",
]
