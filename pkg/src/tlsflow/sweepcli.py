"""Command-line front end: parameter sweeps, spectra, optimal lines, validation.

Configuration is a flat `key = value` text file with `#` comments plus
`--set key=value` overrides.  Grids use the syntax `min:max:count:log` (or
`lin`).  All numeric CSV output is serialized with 17 significant digits so
values round-trip exactly, rows are emitted in a deterministic order
independent of the worker thread count, and line endings are LF.

Exit codes: 0 success, 1 validation failure, 2 configuration or domain error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import moments
from .bath import ReservoirSpec, coupling_rate
from .errors import ConfigError, DomainError, DressedFrameError, SteadyStateError, TlsflowError
from .flows import optimal_line, stationary_flows
from .moments import build_moment_system
from .spectra import splitting_scan
from .system import TlsPair
from .validation import run_criteria

__all__ = ["GridSpec", "SweepConfig", "build_config", "main", "entry"]

_APPROACH_ORDER = ("local", "global", "ps")

_SCALAR_KEYS = {"omega1", "omega2", "c2", "c2_over_c1", "T1", "T2"}
_GRID_KEYS = {"Omega", "c1"}
_INT_KEYS = {"n_exp", "threads"}
_STR_KEYS = {"approach", "output"}
_ALL_KEYS = _SCALAR_KEYS | _GRID_KEYS | _INT_KEYS | _STR_KEYS


@dataclass(frozen=True)
class GridSpec:
    """Inclusive 1-d grid: `min:max:count:log|lin`."""

    lo: float
    hi: float
    count: int
    scale: str

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepConfig:
    approach: str = "all"
    omega1: float = 1.0
    omega2: float = 1.0
    omega: float | GridSpec = 0.05
    c1: float | GridSpec = 0.002
    c2: float = 0.04
    c2_over_c1: float | None = None
    n_exp: int = 3
    t1: float = 0.2
    t2: float = 0.22
    threads: int = 1
    output: str = "-"

    def approaches(self) -> tuple[str, ...]:
        if self.approach == "all":
            return _APPROACH_ORDER
        return (self.approach,)

    def omega_values(self) -> np.ndarray:
        if isinstance(self.omega, GridSpec):
            return self.omega.values()
        return np.array([self.omega])

    def c1_values(self) -> np.ndarray:
        if isinstance(self.c1, GridSpec):
            return self.c1.values()
        return np.array([self.c1])

    def baths_for(self, c1: float) -> tuple[ReservoirSpec, ReservoirSpec]:
        c2 = self.c2_over_c1 * c1 if self.c2_over_c1 is not None else self.c2
        return (ReservoirSpec(temperature=self.t1, prefactor=c1, exponent=self.n_exp),
                ReservoirSpec(temperature=self.t2, prefactor=c2, exponent=self.n_exp))

    def pair_for(self, om: float) -> TlsPair:
        return TlsPair(omega1=self.omega1, omega2=self.omega2, rabi=om)

    def require_scalar(self, key: str) -> float:
        value = {"Omega": self.omega, "c1": self.c1}[key]
        if isinstance(value, GridSpec):
            raise ConfigError(f"key '{key}' must be a scalar for this command")
        return value


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key '{key}': cannot parse '{raw}' as a number") from None


def _parse_grid_or_scalar(key: str, raw: str) -> float | GridSpec:
    if ":" not in raw:
        return _parse_float(key, raw)
    fields = raw.split(":")
    if len(fields) != 4:
        raise ConfigError(f"key '{key}': grid syntax is min:max:count:log|lin")
    lo = _parse_float(key, fields[0])
    hi = _parse_float(key, fields[1])
    try:
        count = int(fields[2])
    except ValueError:
        raise ConfigError(f"key '{key}': grid count '{fields[2]}' is not an integer") from None
    scale = fields[3]
    if scale not in ("log", "lin"):
        raise ConfigError(f"key '{key}': grid scale must be 'log' or 'lin'")
    if count < 2:
        raise ConfigError(f"key '{key}': grid count must be at least 2")
    if not lo < hi:
        raise ConfigError(f"key '{key}': grid bounds must satisfy min < max")
    if scale == "log" and lo <= 0.0:
        raise ConfigError(f"key '{key}': log grid requires min > 0")
    return GridSpec(lo=lo, hi=hi, count=count, scale=scale)


def _parse_kv_text(text: str, origin: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown config key '{key}'")
        out[key] = raw
    return out


def build_config(config_path: str | None, sets: Sequence[str],
                 output_flag: str | None = None) -> SweepConfig:
    raw: dict[str, str] = {}
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                raw.update(_parse_kv_text(fh.read(), config_path))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got '{item}'")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown config key '{key}'")
        raw[key] = value

    if "c2" in raw and "c2_over_c1" in raw:
        raise ConfigError("keys 'c2' and 'c2_over_c1' are mutually exclusive")

    cfg = SweepConfig()
    updates: dict[str, object] = {}
    for key, value in raw.items():
        if key == "approach":
            if value not in ("local", "global", "ps", "all"):
                raise ConfigError(
                    f"key 'approach': '{value}' not in local/global/ps/all")
            updates["approach"] = value
        elif key == "output":
            updates["output"] = value
        elif key in _INT_KEYS:
            try:
                ival = int(value)
            except ValueError:
                raise ConfigError(f"key '{key}': '{value}' is not an integer") from None
            if key == "threads" and ival < 1:
                raise ConfigError("key 'threads': must be at least 1")
            if key == "n_exp" and ival < 0:
                raise ConfigError("key 'n_exp': must be nonnegative")
            updates["n_exp" if key == "n_exp" else "threads"] = ival
        elif key in _GRID_KEYS:
            parsed = _parse_grid_or_scalar(key, value)
            updates["omega" if key == "Omega" else "c1"] = parsed
        else:
            fval = _parse_float(key, value)
            if key in ("omega1", "omega2", "T1", "T2", "c2", "c2_over_c1") and fval <= 0.0:
                raise ConfigError(f"key '{key}': must be positive")
            field = {"omega1": "omega1", "omega2": "omega2", "c2": "c2",
                     "c2_over_c1": "c2_over_c1", "T1": "t1", "T2": "t2"}[key]
            updates[field] = fval
    cfg = replace(cfg, **updates)
    if output_flag is not None:
        cfg = replace(cfg, output=output_flag)
    # scalar grid values must still be positive where physics requires it
    for key in ("Omega", "c1"):
        value = cfg.omega if key == "Omega" else cfg.c1
        if isinstance(value, float):
            if key == "c1" and value <= 0.0:
                raise ConfigError("key 'c1': must be positive")
            if key == "Omega" and value < 0.0:
                raise ConfigError("key 'Omega': must be nonnegative")
        elif key == "c1" and value.lo <= 0.0:
            raise ConfigError("key 'c1': grid values must be positive")
    return cfg


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _emit(header: Sequence[str], rows: Sequence[Sequence], output: str) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(output, "wb") as fh:
                fh.write(text.encode("utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot write output file: {exc}") from exc


def run_eigs(cfg: SweepConfig) -> None:
    omegas = cfg.omega_values()
    pair0 = cfg.pair_for(0.0)
    baths = cfg.baths_for(cfg.require_scalar("c1"))
    scans = {ap: splitting_scan(ap, pair0, baths, omegas, threads=cfg.threads)
             for ap in cfg.approaches()}
    rows = []
    for i, om in enumerate(omegas):
        for ap in cfg.approaches():
            scan = scans[ap]
            for k in range(4):
                val = scan.values[i, k]
                rows.append((om, ap, k, val.real, val.imag))
    _emit(("Omega", "approach", "k", "re_lambda_k", "im_lambda_k"), rows, cfg.output)


def _sweep_point(cfg: SweepConfig, c1: float, om: float, approach: str):
    baths = cfg.baths_for(c1)
    gref = coupling_rate(baths[0], cfg.omega1)
    try:
        pair = cfg.pair_for(om)
        report = stationary_flows(build_moment_system(approach, pair, baths))
    except (DressedFrameError, DomainError, SteadyStateError):
        nan = float("nan")
        return (gref, om, approach, nan, nan, nan, nan, False, True)
    return (gref, om, approach, report.j1, report.j2, report.specific_hot,
            report.first_law_residual, report.second_law_ok, False)


def run_sweep(cfg: SweepConfig) -> None:
    tasks = [(c1, om, ap)
             for c1 in cfg.c1_values()
             for om in cfg.omega_values()
             for ap in cfg.approaches()]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda t: _sweep_point(cfg, *t), tasks))
    else:
        rows = [_sweep_point(cfg, *t) for t in tasks]
    _emit(("gamma1_ref", "Omega", "approach", "J1", "J2", "j_hot",
           "first_law_residual", "second_law_ok", "skipped"), rows, cfg.output)


def run_optline(cfg: SweepConfig) -> None:
    if cfg.approach == "all":
        raise ConfigError("key 'approach': optline requires a single approach")
    if not isinstance(cfg.omega, GridSpec):
        raise ConfigError("key 'Omega': optline requires a grid (search bounds)")
    pair0 = cfg.pair_for(cfg.omega.lo)
    line = optimal_line(
        cfg.approach, pair0, cfg.baths_for, cfg.c1_values(),
        bounds=(cfg.omega.lo, cfg.omega.hi), coarse=max(cfg.omega.count, 8),
        threads=cfg.threads)
    rows = [(line.gamma1_ref[i], line.omega_star[i], line.j_star[i],
             bool(line.boundary[i])) for i in range(line.gamma1_ref.size)]
    _emit(("gamma1_ref", "Omega_star", "j_star", "boundary"), rows, cfg.output)


def run_steady(cfg: SweepConfig) -> None:
    om = cfg.require_scalar("Omega")
    c1 = cfg.require_scalar("c1")
    baths = cfg.baths_for(c1)
    rows = []
    for ap in cfg.approaches():
        report = stationary_flows(build_moment_system(ap, cfg.pair_for(om), baths))
        rows.append((ap, report.occ1, report.occ2, report.coherence.real,
                     report.coherence.imag, report.j1, report.j2,
                     report.j_hot, report.specific_hot, report.hot,
                     report.first_law_residual, report.second_law_ok))
    _emit(("approach", "occ1", "occ2", "coh_re", "coh_im", "J1", "J2",
           "j_hot", "j_specific", "hot_reservoir", "first_law_residual",
           "second_law_ok"),
          rows, cfg.output)


def run_validate(only: str | None, dev_mutate: str | None) -> int:
    ids = None
    if only is not None:
        ids = [part.strip() for part in only.split(",") if part.strip()]
        if not ids:
            raise ConfigError("--only given but no criterion ids parsed")
    if dev_mutate is not None:
        if dev_mutate != "local-sign":
            raise ConfigError(f"unknown --dev-mutate name '{dev_mutate}'")
        moments.DEV_MUTATIONS.add("local-sign-flip")
    try:
        results = run_criteria(ids, stream=sys.stdout)
    finally:
        moments.DEV_MUTATIONS.discard("local-sign-flip")
    return 0 if all(r.passed for r in results) else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tlsflow",
        description="Eigenvalue spectra and stationary energy flows of two "
                    "coupled dissipative two-level systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("eigs", "eigenvalue branches over a coupling grid"),
        ("sweep", "energy flows over a (coupling, damping) grid"),
        ("optline", "optimal coupling versus damping"),
        ("steady", "single-point stationary report"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", default=None, help="key=value config file")
        cmd.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                         help="override one config key")
        cmd.add_argument("-o", "--output", default=None,
                         help="output CSV path ('-' for stdout)")
    val = sub.add_parser("validate", help="run the acceptance criteria")
    val.add_argument("--only", default=None,
                     help="comma-separated criterion ids (default: all)")
    val.add_argument("--dev-mutate", default=None,
                     help="development fault injection (must fail validation)")

    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return run_validate(args.only, args.dev_mutate)
        cfg = build_config(args.config, args.set, args.output)
        runner = {"eigs": run_eigs, "sweep": run_sweep,
                  "optline": run_optline, "steady": run_steady}[args.command]
        runner(cfg)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TlsflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
