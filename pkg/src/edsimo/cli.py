"""Command-line front end: optimize, ser, sweep, and find-antennas commands.

Every command resolves its configuration from built-in defaults, then an
optional key=value config file, then explicit command-line flags (highest
precedence), writes data files as plain CSV/JSON, and drops a single
manifest record next to each data file.  Outputs are deterministic under a
fixed seed; the manifest additionally records wall-clock duration.

Exit codes: 0 success, 2 usage error, 3 convergence or search failure,
4 numerical failure.
"""

import argparse
import json
import sys
import time
from dataclasses import replace

from . import __version__
from .constellation import DesignContext, optimize, to_record
from .errors import ConvergenceError, NumericalError, SearchExhaustedError
from .sim import (
    SimConfig,
    analytic_ser,
    find_min_antennas,
    rows_to_csv,
    run_mc,
    sweep_antennas,
    sweep_snr,
)

DEFAULTS = {
    "k": 4,
    "m": 100,
    "l": 4,
    "decay": 1.0,
    "snr_db": 0.0,
    "j": None,
    "scheme": "pam",
    "seed": 0,
    "blocks": 1000,
    "block_len": 1000,
    "mode": "analytic",
    "axis": "antennas",
    "range": None,
    "target_ser": None,
    "out": None,
}

_INT_KEYS = {"k", "m", "l", "j", "seed", "blocks", "block_len"}
_FLOAT_KEYS = {"decay", "snr_db", "target_ser"}


def _coerce(key, raw):
    if raw is None or raw == "":
        return None
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    return raw


def read_config_file(path):
    """Flat key = value lines; '#' starts a comment; keys mirror flag names."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, raw = (part.strip() for part in text.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, raw)
    return values


def resolve_config(args):
    """defaults < config file < explicit flags."""
    resolved = dict(DEFAULTS)
    if getattr(args, "config", None):
        resolved.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return resolved


def _add_common(parser):
    parser.add_argument("--k", type=int, help="constellation size")
    parser.add_argument("--m", type=int, help="number of receive antennas")
    parser.add_argument("--l", type=int, help="channel tap count")
    parser.add_argument("--decay", type=float, help="exponential profile decay rate")
    parser.add_argument("--snr-db", dest="snr_db", type=float, help="transmit SNR in dB")
    parser.add_argument("--j", type=int, help="equalizer length (default 4(L-1)+1)")
    parser.add_argument("--scheme", choices=("pam", "optimal"), help="constellation scheme")
    parser.add_argument("--seed", type=int, help="master random seed")
    parser.add_argument("--blocks", type=int, help="Monte Carlo block count")
    parser.add_argument("--block-len", dest="block_len", type=int, help="symbols per block")
    parser.add_argument("--out", help="output data file path")
    parser.add_argument("--config", help="key = value config file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="edsimo",
        description="Energy-detection massive SIMO link tool: constellation design, SER evaluation, Monte Carlo sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="design the SER-optimal constellation and write its record")
    _add_common(p_opt)

    p_ser = sub.add_parser("ser", help="evaluate SER at one operating point")
    _add_common(p_ser)
    p_ser.add_argument("--mode", choices=("analytic", "mc", "both"), help="evaluation mode")

    p_sweep = sub.add_parser("sweep", help="SER sweep over antennas or SNR, both schemes")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", choices=("antennas", "snr"), help="sweep axis")
    p_sweep.add_argument("--range", dest="range", help="start:stop:step (inclusive stop)")

    p_find = sub.add_parser("find-antennas", help="minimum antennas to reach a target SER, both schemes")
    _add_common(p_find)
    p_find.add_argument("--target-ser", dest="target_ser", type=float, help="target SER in (0, 1)")
    return parser


def _sim_config(cfg, scheme=None, **overrides):
    base = SimConfig(
        M=cfg["m"],
        K=cfg["k"],
        L=cfg["l"],
        decay=cfg["decay"],
        snr_db=cfg["snr_db"],
        scheme=scheme or cfg["scheme"],
        block_len=cfg["block_len"],
        blocks=cfg["blocks"],
        seed=cfg["seed"],
        J=cfg["j"],
    )
    return replace(base, **overrides) if overrides else base


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_manifest(command, cfg, outputs, started):
    manifest = {
        "command": command,
        "config": cfg,
        "seed": cfg["seed"],
        "artifact_version": __version__,
        "outputs": [str(p) for p in outputs],
        "duration_s": round(time.time() - started, 6),
    }
    path = str(outputs[0]) + ".manifest.json"
    _write(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def _parse_range(text):
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except (AttributeError, ValueError):
        raise ValueError(f"range must be start:stop:step, got {text!r}")
    if step <= 0 or stop < start:
        raise ValueError(f"empty range {text!r}")
    values = []
    x = start
    while x <= stop + 1e-9:
        values.append(x)
        x += step
    return values


def cmd_optimize(cfg):
    started = time.time()
    config = _sim_config(cfg, scheme="optimal")
    profile = config.profile()
    ctx = DesignContext(
        M=float(config.M),
        K=config.K,
        profile=profile,
        sigma_n_sq=config.noise().sigma_n_sq,
        w=_equalizer(config).w,
    )
    result = optimize(config.K, config.M, profile, ctx.sigma_n_sq, _equalizer(config))
    out = cfg["out"] or "constellation.json"
    record = to_record(result, ctx, config.snr_db)
    record["iterations"] = result.iterations
    _write(out, json.dumps(record, sort_keys=True, indent=2) + "\n")
    _write_manifest("optimize", cfg, [out], started)
    print(out)
    return 0


def _equalizer(config):
    from .equalizer import build_zf, select_delay

    profile = config.profile()
    J = config.resolved_J
    return build_zf(profile, J, select_delay(profile, J))


def cmd_ser(cfg):
    started = time.time()
    mode = cfg["mode"]
    config = _sim_config(cfg)
    a = analytic_ser(config)
    if mode == "analytic":
        mc = ci_lo = ci_hi = float("nan")
        trials = 0
    else:
        est = run_mc(config)
        mc, ci_lo, ci_hi, trials = est.ser, est.ci95_low, est.ci95_high, est.trials
    header = "scheme,M,K,L,snr_db,analytic_ser,mc_ser,ci_low,ci_high,trials"
    row = (
        f"{config.scheme},{config.M},{config.K},{config.L},{config.snr_db:.10g},"
        f"{a:.10e},{mc:.10e},{ci_lo:.10e},{ci_hi:.10e},{trials}"
    )
    text = header + "\n" + row + "\n"
    if cfg["out"]:
        _write(cfg["out"], text)
        _write_manifest("ser", cfg, [cfg["out"]], started)
        print(cfg["out"])
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(cfg):
    started = time.time()
    if not cfg["range"]:
        raise ValueError("sweep requires --range start:stop:step")
    values = _parse_range(cfg["range"])
    base = _sim_config(cfg)
    if cfg["axis"] == "antennas":
        rows = sweep_antennas(base, [int(v) for v in values])
    else:
        rows = sweep_snr(base, values)
    footer = []
    if cfg["axis"] == "snr" and len(values) >= 2:
        for scheme in ("pam", "optimal"):
            tail = [r for r in rows if r.scheme == scheme][-2:]
            prev, last = tail[0].analytic_ser, tail[1].analytic_ser
            rel = abs(prev - last) / last if last > 0 else float("inf")
            footer.append(
                f"snr_floor scheme={scheme} ser_at_{tail[0].snr_db:g}dB={prev:.6e} "
                f"ser_at_{tail[1].snr_db:g}dB={last:.6e} rel_change={rel:.4f} "
                f"floor_detected={rel < 0.05}"
            )
    out = cfg["out"] or f"sweep_{cfg['axis']}.csv"
    _write(out, rows_to_csv(rows, footer))
    _write_manifest("sweep", cfg, [out], started)
    print(out)
    return 0


def cmd_find_antennas(cfg):
    started = time.time()
    if cfg["target_ser"] is None:
        raise ValueError("find-antennas requires --target-ser")
    base = _sim_config(cfg)
    results = {
        scheme: find_min_antennas(cfg["target_ser"], cfg["snr_db"], scheme, base)
        for scheme in ("pam", "optimal")
    }
    reduction = 100.0 * (results["pam"].M - results["optimal"].M) / results["pam"].M
    header = (
        "target_ser,snr_db,m_pam,m_optimal,reduction_pct,"
        "analytic_pam,analytic_optimal,mc_pam,mc_optimal"
    )
    row = (
        f"{cfg['target_ser']:.10g},{cfg['snr_db']:.10g},{results['pam'].M},{results['optimal'].M},"
        f"{reduction:.4f},{results['pam'].analytic_ser:.10e},{results['optimal'].analytic_ser:.10e},"
        f"{results['pam'].confirmation.ser:.10e},{results['optimal'].confirmation.ser:.10e}"
    )
    text = header + "\n" + row + "\n"
    if cfg["out"]:
        _write(cfg["out"], text)
        _write_manifest("find-antennas", cfg, [cfg["out"]], started)
        print(cfg["out"])
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "optimize": cmd_optimize,
    "ser": cmd_ser,
    "sweep": cmd_sweep,
    "find-antennas": cmd_find_antennas,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    if cfg["k"] < 2:
        parser.error("K must be >= 2")
    try:
        return _COMMANDS[args.command](cfg)
    except ValueError as exc:
        parser.error(str(exc))
    except ConvergenceError as exc:
        print(
            f"error: {exc} (bracket [{exc.t_lower}, {exc.t_upper}] after {exc.iterations} iterations)",
            file=sys.stderr,
        )
        return 3
    except SearchExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
