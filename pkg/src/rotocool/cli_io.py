"""Command-line interface: config parsing, subcommands, CSV emission.

Config files are flat key = value text; any CLI flag overrides the
file.  Every CSV gets a JSON metadata sidecar carrying the fully
resolved configuration and the unit conventions, so a run can be
reproduced from the sidecar alone.  All output is deterministic:
reruns are byte-identical.
"""
import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .condensate import dispersion, dk_domega, inverse_dispersion, w_factor
from .errors import (DegenerateTransition, DomainError, InvalidParams,
                     NonUniqueSteadyState, QuadratureFailure, RotocoolError,
                     StiffnessFailure)
from .kinetics import (PopulationVector, assemble_generator, diagnostics,
                       evolve, truncation_leak)
from .params import (SystemParams, critical_j, derive_constants,
                     thermal_angular_momentum)
from .rates_single import (CHANNEL_1PH_SP, CHANNELS, channel_rate_matrix)
from .rates_two import EtaQuadrature, thermal_2ph_ratio

# Exit codes by failure category.
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARAMS = 3
EXIT_COMPUTE = 4
EXIT_IO = 5

# Unicode channel spellings accepted on input.
_CHANNEL_ALIASES = {"2ph-×": "2ph-x", "2ph-≺": "2ph-pair"}

_UNITS = {
    "length": "healing length xi",
    "energy": "c/xi (hbar = c = xi = 1)",
    "rate": "c/xi",
    "time": "xi/c",
    "temperature": "energy (k_B = 1)",
}


class ConfigError(RotocoolError, ValueError):
    """Malformed configuration file or option value."""


@dataclass
class RunConfig:
    """Fully resolved run configuration; defaults suit quick smoke runs."""

    r0_over_xi: float = 0.1
    mI_over_mB: float = 2.0
    T_over_Tc: float = 0.0
    n0_xi3: float = 100.0
    gIB_over_g: float = 1.0
    jmax: int = 8
    initial_state: str = "delta(2)"
    channels: tuple = (CHANNEL_1PH_SP,)
    t_start: float = 0.0
    t_end: float = 1000.0
    points: int = 50
    spacing: str = "linear"
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    out: str = "."
    threads: int = 1
    scan_T_over_Tc: tuple = (0.05, 0.1, 0.2)
    scan_n0_xi3: tuple = (100.0, 1e4)
    k_max: float = 10.0
    k_points: int = 201

    def system_params(self) -> SystemParams:
        return SystemParams(r0_over_xi=self.r0_over_xi,
                            mI_over_mB=self.mI_over_mB,
                            T_over_Tc=self.T_over_Tc,
                            n0_xi3=self.n0_xi3,
                            gIB_over_g=self.gIB_over_g)

    def quadrature(self) -> EtaQuadrature:
        return EtaQuadrature(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def initial_populations(self) -> PopulationVector:
        return _parse_initial_state(self.initial_state, self.jmax)

    def time_grid(self):
        if self.t_end <= self.t_start or self.t_start < 0.0:
            raise ConfigError("need t_end > t_start >= 0")
        if self.points < 2:
            raise ConfigError("points must be at least 2")
        if self.spacing == "linear":
            return np.linspace(self.t_start, self.t_end, self.points)
        if self.spacing == "log":
            if self.t_start <= 0.0:
                raise ConfigError("log spacing needs t_start > 0")
            return np.geomspace(self.t_start, self.t_end, self.points)
        raise ConfigError("spacing must be 'linear' or 'log'")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["channels"] = list(self.channels)
        d["scan_T_over_Tc"] = list(self.scan_T_over_Tc)
        d["scan_n0_xi3"] = list(self.scan_n0_xi3)
        return d


def _parse_channels(text) -> tuple:
    if isinstance(text, tuple):
        return text
    names = []
    for raw in str(text).split(","):
        name = raw.strip()
        if not name:
            continue
        name = _CHANNEL_ALIASES.get(name, name)
        if name not in CHANNELS:
            raise ConfigError("unknown channel %r (known: %s)"
                              % (raw.strip(), ", ".join(CHANNELS)))
        names.append(name)
    return tuple(names)


def _parse_initial_state(text: str, jmax: int) -> PopulationVector:
    text = text.strip()
    if text.startswith("delta(") and text.endswith(")"):
        try:
            j0 = int(text[6:-1])
        except ValueError:
            raise ConfigError("bad initial_state %r" % text) from None
        if not 0 <= j0 <= jmax:
            raise ConfigError("initial_state level %d outside 0..%d"
                              % (j0, jmax))
        return PopulationVector.delta(j0, jmax)
    weights = np.zeros(jmax + 1)
    try:
        for item in text.split(","):
            level, _, weight = item.partition(":")
            weights[int(level.strip())] = float(weight)
    except (ValueError, IndexError):
        raise ConfigError("bad initial_state %r" % text) from None
    total = weights.sum()
    if total <= 0.0:
        raise ConfigError("initial_state has no weight")
    return PopulationVector(p=weights / total)


def _parse_float_list(text) -> tuple:
    if isinstance(text, tuple):
        return text
    try:
        return tuple(float(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise ConfigError("bad number list %r" % text) from None


_FIELD_PARSERS = {
    "r0_over_xi": float, "mI_over_mB": float, "T_over_Tc": float,
    "n0_xi3": float, "gIB_over_g": float, "jmax": int,
    "initial_state": str, "channels": _parse_channels,
    "t_start": float, "t_end": float, "points": int, "spacing": str,
    "rel_tol": float, "abs_tol": float, "out": str, "threads": int,
    "scan_T_over_Tc": _parse_float_list, "scan_n0_xi3": _parse_float_list,
    "k_max": float, "k_points": int,
}


def read_config(path) -> dict:
    """Parse a flat key = value file; '#' starts a comment."""
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError("cannot read config: %s" % exc) from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _FIELD_PARSERS:
            raise ConfigError("line %d: expected '<field> = <value>', got %r"
                              % (lineno, raw))
        try:
            values[key] = _FIELD_PARSERS[key](value.strip())
        except (ValueError, ConfigError) as exc:
            raise ConfigError("line %d: %s" % (lineno, exc)) from None
    return values


def build_config(args) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config(args.config))
    for flag in ("out", "jmax", "threads"):
        v = getattr(args, flag, None)
        if v is not None:
            values[flag] = v
    if getattr(args, "channels", None) is not None:
        values["channels"] = _parse_channels(args.channels)
    return RunConfig(**values)


def _fmt(x: float) -> str:
    # 17 significant digits: doubles round-trip exactly
    return "%.16e" % float(x)


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _write_sidecar(csv_path: Path, command: str, cfg: RunConfig,
                   extra=None) -> None:
    meta = {
        "command": command,
        "config": cfg.as_dict(),
        "units": _UNITS,
        "package": "artifact %s" % __version__,
        "kernel_backend": BACKEND,
    }
    if extra:
        meta.update(extra)
    side = csv_path.with_suffix(".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_rates(cfg: RunConfig) -> int:
    p = cfg.system_params()
    out = _out_dir(cfg)
    q = cfg.quadrature()
    for channel in cfg.channels:
        mat = channel_rate_matrix(p, cfg.jmax, channel, q, cfg.threads)
        rows = [(float(j), float(jp), mat.gamma[j, jp])
                for j in range(cfg.jmax + 1) for jp in range(cfg.jmax + 1)]
        path = out / ("rates_%s.csv" % channel)
        _write_csv(path, ("j", "j_prime", "rate"), rows)
        _write_sidecar(path, "rates", cfg, {"channel": channel})
        print("wrote %s" % path)
    return EXIT_OK


def cmd_critical(cfg: RunConfig) -> int:
    p = cfg.system_params()
    d = derive_constants(p)
    j_c, j_c1 = critical_j(p)
    j_t = thermal_angular_momentum(p)
    rows = [
        ("j_c", j_c, math.floor(j_c)),
        ("j_c1", j_c1, math.floor(j_c1)),
        ("j_T", j_t, math.floor(j_t)),
        ("B_rot", d.B_rot, None),
        ("T_c", d.T_c, None),
    ]
    for name, value, floored in rows:
        if floored is None:
            print("%s = %s" % (name, _fmt(value)))
        else:
            print("%s = %s (floor %d)" % (name, _fmt(value), floored))
    if cfg.out != ".":
        out = _out_dir(cfg)
        path = out / "critical.csv"
        _write_csv(path, ("quantity", "value", "floor"),
                   [(name, value, "" if floored is None else str(floored))
                    for name, value, floored in rows])
        _write_sidecar(path, "critical", cfg)
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    p = cfg.system_params()
    out = _out_dir(cfg)
    p0 = cfg.initial_populations()
    gen = assemble_generator(p, cfg.jmax, cfg.channels, cfg.quadrature(),
                             cfg.threads)
    import warnings as _warnings
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        traj = evolve(p0, gen, cfg.time_grid())
    leak = truncation_leak(traj)
    extra = {"truncation_leak": leak}
    if leak > 1e-6:
        extra["warnings"] = ["truncation leak %.3e above 1e-6; raise jmax"
                             % leak]
    rows = [(pv.time, float(j), pv.p[j])
            for pv in traj for j in range(pv.p.size)]
    path = out / "trajectory.csv"
    _write_csv(path, ("t", "j", "p"), rows)
    _write_sidecar(path, "evolve", cfg, extra)
    diag = diagnostics(traj, p)
    drows = list(zip(diag.time, diag.mean_j, diag.mass_below_jc1,
                     diag.entropy, diag.norm))
    dpath = out / "diagnostics.csv"
    _write_csv(dpath, ("t", "mean_j", "mass_below_jc1", "entropy", "norm"),
               drows)
    _write_sidecar(dpath, "evolve", cfg, extra)
    print("wrote %s and %s" % (path, dpath))
    return EXIT_OK


def cmd_scan_ratio(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    rows = []
    for n0 in cfg.scan_n0_xi3:
        for tt in cfg.scan_T_over_Tc:
            p = SystemParams(r0_over_xi=cfg.r0_over_xi,
                             mI_over_mB=cfg.mI_over_mB,
                             T_over_Tc=tt, n0_xi3=n0,
                             gIB_over_g=cfg.gIB_over_g)
            rows.append((tt, n0, thermal_2ph_ratio(p), tt ** 1.5))
    path = out / "ratio.csv"
    _write_csv(path, ("T_over_Tc", "n0_xi3", "ratio", "universal"), rows)
    _write_sidecar(path, "scan-ratio", cfg)
    print("wrote %s" % path)
    return EXIT_OK


def cmd_dispersion(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    if cfg.k_max <= 0.0 or cfg.k_points < 2:
        raise ConfigError("need k_max > 0 and k_points >= 2")
    ks = np.linspace(0.0, cfg.k_max, cfg.k_points)
    rows = []
    prev_w = -1.0
    for k in ks:
        omega = dispersion(k)
        w = w_factor(k) if k > 0.0 else 0.0
        back = inverse_dispersion(omega)
        if abs(back - k) > 1e-12 * max(1.0, k):
            raise QuadratureFailure("round-trip k(omega(k)) off at k=%g" % k)
        if w <= prev_w and k > 0.0:
            raise QuadratureFailure("w_factor not increasing at k=%g" % k)
        prev_w = w
        rows.append((k, omega, w, dk_domega(omega), back))
    path = out / "dispersion.csv"
    _write_csv(path, ("k", "omega", "w_factor", "dk_domega", "k_roundtrip"),
               rows)
    _write_sidecar(path, "dispersion", cfg)
    print("wrote %s" % path)
    return EXIT_OK


_COMMANDS = {
    "rates": cmd_rates,
    "critical": cmd_critical,
    "evolve": cmd_evolve,
    "scan-ratio": cmd_scan_ratio,
    "dispersion": cmd_dispersion,
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--jmax", type=int, help="highest rotor level")
    common.add_argument("--channels",
                        help="comma list from: %s" % ", ".join(CHANNELS))
    common.add_argument("--threads", type=int,
                        help="worker threads for rate assembly")
    ap = argparse.ArgumentParser(
        prog="rotocool",
        description="Phonon-induced rotational relaxation of a diatomic "
                    "impurity in a condensate")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("rates", parents=[common],
                   help="transition-rate matrices per channel")
    sub.add_parser("critical", parents=[common],
                   help="critical and thermal angular momenta")
    sub.add_parser("evolve", parents=[common],
                   help="integrate the population kinetics")
    sub.add_parser("scan-ratio", parents=[common],
                   help="thermal two-phonon to single-phonon ratio scan")
    sub.add_parser("dispersion", parents=[common],
                   help="tabulate the phonon branch")
    return ap


def _fail(category: str, exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps(
        {"error": {"category": category, "message": str(exc)}}) + "\n")
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except (InvalidParams, DomainError) as exc:
        return _fail("invalid-params", exc, EXIT_PARAMS)
    except (QuadratureFailure, StiffnessFailure, DegenerateTransition,
            NonUniqueSteadyState) as exc:
        return _fail("computation", exc, EXIT_COMPUTE)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
