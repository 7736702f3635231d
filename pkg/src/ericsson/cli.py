"""Command-line runner.

Usage::

    ericsson COMMAND [options]
    ericsson --config run.ini [COMMAND] [options]

Commands: ``state``, ``cycle``, ``sweep``, ``langevin-moments``,
``langevin-traj`` and ``validate``. Results are written as CSV, JSON,
plotdata (whitespace columns, one block per sweep slice) or a minimal SVG
line plot.

Config files are INI-style ``key = value`` lines under section headers::

    [run]
    command = sweep

    [params]
    omega0 = 1
    gamma = 0.2
    omegaD = 100
    temperature = 2        ; or beta = 0.5, never both

    [cycle]
    b1 = 0.5
    t_cold = 0.5

    [sweep]
    b2 = 1:4:7             ; start:stop:count, or a single value
    t_hot = 0.75:2:3
    workers = 1

    [trajectory]
    protocol = linear      ; constant | linear | table
    b_start = 0.5
    b_end = 2
    t_ramp = 50
    seed = 0
    n_traj = 1

    [output]
    format = csv
    path = result.csv
    timestamp = no

Values given as flags override the file. Exit status is 0 on success, 1
when a computation fails and 2 for usage or validation errors.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import datetime
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cycle import CycleSpec, efficiency, sweep
from .errors import DomainError, EricssonError, StepSizeError
from .model import DEFAULT_PARAMS, SystemParams, fock_darwin, make_params

__all__ = ["AxisRange", "RunConfig", "OutputTable", "UsageError", "parse_config", "run", "emit", "main"]

COMMANDS = ("state", "cycle", "sweep", "langevin-moments", "langevin-traj", "validate")
FORMATS = ("csv", "json", "plotdata", "svg")
SWEEP_AXES = ("gamma", "b1", "t_cold", "t_hot", "b2")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

# built-in defaults, also shown by --help
DEFAULTS = {
    "params": {k: getattr(DEFAULT_PARAMS, k) for k in ("omega0", "omegac", "gamma", "omegaD", "beta")},
    "cycle": {"b1": 0.5, "b2": 2.0, "t_cold": 0.5, "t_hot": 1.0},
    "sweep": {"gamma": None, "b1": "0.5", "t_cold": "0.5", "t_hot": "0.75:2:3", "b2": "1:4:7", "workers": 1},
    "trajectory": {
        "protocol": "constant",
        "b_start": None,
        "b_end": None,
        "t_ramp": None,
        "table": None,
        "seed": 0,
        "dt": None,
        "t_end": 10.0,
        "t_burn": 0.0,
        "n_traj": 1,
        "stride": 1,
    },
    "output": {"format": "csv", "path": None, "timestamp": True},
}


class UsageError(Exception):
    """Bad flags, unreadable config or invalid values."""


@dataclass(frozen=True)
class AxisRange:
    """``count`` points from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise UsageError(f"range count must be >= 1, got {self.count}")
        if self.count == 1 and self.stop != self.start:
            raise UsageError("a single-point range needs start == stop")

    @classmethod
    def parse(cls, text, name="range") -> AxisRange:
        parts = str(text).split(":")
        try:
            if len(parts) == 1:
                v = float(parts[0])
                return cls(v, v, 1)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            pass
        raise UsageError(f"{name}: expected VALUE or START:STOP:COUNT, got {text!r}")

    def values(self) -> list:
        if self.count == 1:
            return [self.start]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]

    def __str__(self):
        return f"{self.start!r}" if self.count == 1 else f"{self.start!r}:{self.stop!r}:{self.count}"


@dataclass(frozen=True)
class TrajectoryConfig:
    protocol: str = "constant"
    b_start: float | None = None
    b_end: float | None = None
    t_ramp: float | None = None
    table: str | None = None
    seed: int = 0
    dt: float | None = None
    t_end: float = 10.0
    t_burn: float = 0.0
    n_traj: int = 1
    stride: int = 1


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, validated."""

    command: str
    params: SystemParams
    cycle: dict
    sweep: dict
    trajectory: TrajectoryConfig
    output_format: str = "csv"
    output_path: str | None = None
    timestamp: bool = True
    workers: int = 1


@dataclass
class OutputTable:
    """Rows of values under ``columns`` plus a metadata header.

    ``block_key`` names the columns whose changing value starts a new
    plotdata block; ``plot`` is the ``(x, y)`` column pair drawn by the SVG
    emitter.
    """

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    block_key: tuple = ()
    plot: tuple | None = None

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row has {len(row)} values for {len(self.columns)} columns")

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))


# ---------------------------------------------------------------- parsing


def _help(section, key, text):
    d = DEFAULTS[section][key]
    return f"{text} (default: {d})" if d is not None else text


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ericsson",
        description="Thermodynamics and Ericsson-cycle efficiency of a damped charged oscillator "
        "in a magnetic field (natural units hbar = k_B = m = |e| = c = 1).",
        epilog="Default parameters are arbitrary but inside the validated regime. "
        "Ranges are VALUE or START:STOP:COUNT. Exit codes: 0 ok, 1 computation failure, 2 usage error.",
    )
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="what to compute (may come from [run] in --config)")
    ap.add_argument("--config", metavar="FILE", help="INI file with [run], [params], [cycle], [sweep], [trajectory], [output]")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    g = ap.add_argument_group("system parameters")
    g.add_argument("--omega0", type=float, help=_help("params", "omega0", "trap frequency"))
    g.add_argument("--omegac", type=float, help=_help("params", "omegac", "cyclotron frequency = field B"))
    g.add_argument("--gamma", type=float, help=_help("params", "gamma", "Ohmic damping rate"))
    g.add_argument("--omegaD", type=float, help=_help("params", "omegaD", "Drude cutoff"))
    t = g.add_mutually_exclusive_group()
    t.add_argument("--beta", type=float, help=_help("params", "beta", "inverse temperature"))
    t.add_argument("--temperature", type=float, help="temperature 1/beta")

    g = ap.add_argument_group("cycle (corner fields and temperatures)")
    for key, text in (("b1", "low field"), ("b2", "high field"), ("t_cold", "cold temperature"), ("t_hot", "hot temperature")):
        g.add_argument(f"--{key.replace('_', '-')}", dest=key, help=_help("cycle", key, text) + "; a range for sweep")

    g = ap.add_argument_group("sweep")
    g.add_argument("--gamma-range", dest="gamma_range", help="damping axis for sweep (default: --gamma)")
    g.add_argument("--workers", type=int, help=_help("sweep", "workers", "parallel processes"))

    g = ap.add_argument_group("langevin trajectories")
    g.add_argument("--protocol", choices=("constant", "linear", "table"), help=_help("trajectory", "protocol", "field schedule"))
    g.add_argument("--b-start", dest="b_start", type=float, help="ramp start field (default: --omegac)")
    g.add_argument("--b-end", dest="b_end", type=float, help="ramp end field (default: --omegac)")
    g.add_argument("--t-ramp", dest="t_ramp", type=float, help="ramp duration (default: --t-end)")
    g.add_argument("--protocol-table", dest="table", metavar="FILE", help="two-column (time, B) table, linearly interpolated")
    g.add_argument("--seed", type=int, help=_help("trajectory", "seed", "root random seed"))
    g.add_argument("--dt", type=float, help="time step (default: largest allowed, 0.05 / fastest rate)")
    g.add_argument("--t-end", dest="t_end", type=float, help=_help("trajectory", "t_end", "recorded duration"))
    g.add_argument("--t-burn", dest="t_burn", type=float, help=_help("trajectory", "t_burn", "discarded equilibration time"))
    g.add_argument("--n-traj", dest="n_traj", type=int, help=_help("trajectory", "n_traj", "trajectories; 1 gives a time series"))
    g.add_argument("--stride", type=int, help=_help("trajectory", "stride", "write every n-th time step"))

    g = ap.add_argument_group("output")
    g.add_argument("--format", choices=FORMATS, help=_help("output", "format", "output format"))
    g.add_argument("-o", "--output", dest="path", metavar="PATH", help="output file (default: stdout)")
    g.add_argument("--no-timestamp", dest="timestamp", action="store_false", default=None, help="omit the timestamp metadata line")
    return ap


def _read_config(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # keep omegaD
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    except configparser.Error as exc:
        raise UsageError(f"config {path}: {exc}") from exc
    known = {"run": {"command"}, **{s: set(DEFAULTS[s]) for s in DEFAULTS}}
    known["params"] = known["params"] | {"temperature"}
    out = {}
    for section in cp.sections():
        if section not in known:
            raise UsageError(f"config {path}: unknown section [{section}]")
        for key, value in cp.items(section):
            if key not in known[section]:
                raise UsageError(f"config {path}: unknown key {key!r} in [{section}]")
            out[(section, key)] = value
    return out


def _number(value, name, kind=float):
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: expected {kind.__name__}, got {value!r}") from None


def _flag_or_file(args, file, section, key, dest=None):
    v = getattr(args, dest or key, None)
    if v is not None:
        return v
    if (section, key) in file:
        return file[(section, key)]
    return DEFAULTS[section][key]


def parse_config(argv=None) -> RunConfig:
    """Build a :class:`RunConfig` from flags and an optional config file.

    Raises
    ------
    UsageError
        For unreadable files, unknown keys, conflicting or malformed values
        and parameter validation failures (naming the field).
    """
    ap = build_parser()
    args = _parse_args(ap, argv)
    file = _read_config(args.config) if args.config else {}

    command = args.command or file.get(("run", "command"))
    if command is None:
        raise UsageError("no command given")
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")

    # temperature: flags beat the file; either form, never both at one level
    if ("params", "beta") in file and ("params", "temperature") in file:
        raise UsageError("[params] beta and temperature are mutually exclusive")
    vals = {}
    for key in ("omega0", "omegac", "gamma", "omegaD"):
        vals[key] = _number(_flag_or_file(args, file, "params", key), key)
    if args.beta is not None:
        vals["beta"] = args.beta
    elif args.temperature is not None:
        vals["beta"] = 1.0 / _positive(args.temperature, "temperature")
    elif ("params", "temperature") in file:
        vals["beta"] = 1.0 / _positive(_number(file[("params", "temperature")], "temperature"), "temperature")
    else:
        vals["beta"] = _number(_flag_or_file(args, file, "params", "beta"), "beta")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            params = make_params(**vals)
    except DomainError as exc:
        raise UsageError(f"invalid {exc.field}: {exc}") from exc

    if command == "sweep":
        sweep_axes = {}
        for key in ("b1", "t_cold", "t_hot", "b2"):
            v = getattr(args, key) or file.get(("sweep", key)) or file.get(("cycle", key)) or DEFAULTS["sweep"][key]
            sweep_axes[key] = AxisRange.parse(v, key)
        g = args.gamma_range or file.get(("sweep", "gamma"))
        sweep_axes["gamma"] = AxisRange.parse(g, "gamma") if g is not None else AxisRange(params.gamma, params.gamma, 1)
        cycle = {}
    else:
        sweep_axes = {}
        cycle = {k: _number(_flag_or_file(args, file, "cycle", k), k) for k in DEFAULTS["cycle"]}

    tr = {}
    for key, default in DEFAULTS["trajectory"].items():
        dest = key
        v = _flag_or_file(args, file, "trajectory", key, dest)
        if v is not None and key not in ("protocol", "table"):
            v = _number(v, key, int if key in ("seed", "n_traj", "stride") else float)
        tr[key] = v
    if tr["protocol"] not in ("constant", "linear", "table"):
        raise UsageError(f"protocol: expected constant, linear or table, got {tr['protocol']!r}")
    if tr["protocol"] == "table" and not tr["table"]:
        raise UsageError("protocol 'table' needs --protocol-table FILE")
    if tr["n_traj"] < 1 or tr["stride"] < 1:
        raise UsageError("n_traj and stride must be >= 1")
    if tr["seed"] < 0:
        raise UsageError("seed must be >= 0")

    fmt = _flag_or_file(args, file, "output", "format")
    if fmt not in FORMATS:
        raise UsageError(f"format: expected one of {', '.join(FORMATS)}, got {fmt!r}")
    timestamp = args.timestamp
    if timestamp is None:
        raw = file.get(("output", "timestamp"))
        timestamp = True if raw is None else _boolean(raw, "timestamp")
    workers = _number(_flag_or_file(args, file, "sweep", "workers"), "workers", int)

    return RunConfig(
        command=command,
        params=params,
        cycle=cycle,
        sweep=sweep_axes,
        trajectory=TrajectoryConfig(**tr),
        output_format=fmt,
        output_path=_flag_or_file(args, file, "output", "path"),
        timestamp=timestamp,
        workers=max(1, workers),
    )


def _parse_args(ap, argv):
    # argparse exits on its own errors; convert to UsageError for one code path
    err = io.StringIO()
    try:
        stderr, sys.stderr = sys.stderr, err
        try:
            return ap.parse_args(argv)
        finally:
            sys.stderr = stderr
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise UsageError(err.getvalue().strip()) from None


def _positive(v, name):
    if not v > 0:
        raise UsageError(f"invalid {name}: must be > 0, got {v!r}")
    return v


def _boolean(raw, name):
    s = str(raw).strip().lower()
    if s in ("1", "yes", "true", "on"):
        return True
    if s in ("0", "no", "false", "off"):
        return False
    raise UsageError(f"{name}: expected yes/no, got {raw!r}")


# ---------------------------------------------------------------- commands


def _metadata(config: RunConfig) -> dict:
    p = config.params
    md = {"tool": "ericsson", "version": __version__, "command": config.command}
    md.update({k: getattr(p, k) for k in ("omega0", "omegac", "gamma", "omegaD", "beta")})
    md["temperature"] = p.temperature
    return md


def _state(config):
    from .gibbs import thermo_state

    p = config.params
    s = thermo_state(p, check=True)
    fd = fock_darwin(p)
    cols = ["omega0", "omegac", "gamma", "omegaD", "beta", "free_energy", "internal_energy", "entropy",
            "magnetization", "omega_plus", "omega_minus"]
    table = OutputTable(cols)
    table.add(p.omega0, p.omegac, p.gamma, p.omegaD, p.beta, s.free_energy, s.internal_energy, s.entropy,
              s.magnetization, fd.omega_plus, fd.omega_minus)
    table.metadata["fd_rtol"] = 1e-6
    table.metadata["legendre_residual"] = s.diagnostics["legendre_residual"]
    return table


_CYCLE_COLUMNS = ["gamma", "b1", "t_cold", "t_hot", "b2", "delta_w", "delta_q", "eta", "eta_carnot", "engine"]


def _cycle(config):
    c = config.cycle
    spec = CycleSpec(c["b1"], c["b2"], c["t_cold"], c["t_hot"], config.params)
    r = efficiency(spec, legs=True)
    table = OutputTable(_CYCLE_COLUMNS + list(r.legs))
    table.add(config.params.gamma, spec.b1, spec.t_cold, spec.t_hot, spec.b2, r.delta_w, r.delta_q, r.eta,
              r.eta_carnot, r.engine, *r.legs.values())
    table.metadata.update({k: c[k] for k in ("b1", "b2", "t_cold", "t_hot")})
    return table


def _sweep(config):
    axes = config.sweep
    rows = sweep(
        config.params,
        gamma=axes["gamma"].values(),
        b1=axes["b1"].values(),
        t_cold=axes["t_cold"].values(),
        t_hot=axes["t_hot"].values(),
        b2=axes["b2"].values(),
        max_workers=config.workers,
    )
    table = OutputTable(_CYCLE_COLUMNS + ["error"], block_key=SWEEP_AXES[:-1])
    failures = 0
    for row in rows:
        r = row.result
        if r is None:
            failures += 1
            table.add(row.gamma, row.b1, row.t_cold, row.t_hot, row.b2, None, None, None, None, None, row.error)
        else:
            table.add(row.gamma, row.b1, row.t_cold, row.t_hot, row.b2, r.delta_w, r.delta_q, r.eta, r.eta_carnot,
                      r.engine, None)
    for name in SWEEP_AXES:
        table.metadata[f"sweep_{name}"] = str(axes[name])
    # plot eta against the fastest axis that actually varies
    varying = [a for a in SWEEP_AXES if axes[a].count > 1]
    x = varying[-1] if varying else "b2"
    table.plot = (x, "eta")
    table.block_key = tuple(a for a in SWEEP_AXES if a != x)
    table.metadata["failed_cells"] = failures
    return table, (EXIT_FAILURE if failures else EXIT_OK)


def _moments(config):
    from .gibbs import internal_energy, magnetization
    from .langevin.moments import QUAD_EPSABS, stationary_moments

    p = config.params
    m = stationary_moments(p)
    names = ["xx", "yy", "xy", "vxvx", "vyvy", "vxvy", "xvx", "yvy", "xvy", "yvx", "energy", "magnetization"]
    table = OutputTable(names + ["gibbs_internal_energy", "gibbs_magnetization"])
    table.add(*[getattr(m, n) for n in names], internal_energy(p), magnetization(p))
    table.metadata["quad_epsabs"] = QUAD_EPSABS
    return table


def _load_protocol_table(path):
    from .langevin.trajectory import Protocol

    rows = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.replace(",", " ").split()
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except (ValueError, IndexError):
                    if rows:
                        raise UsageError(f"{path}:{lineno}: expected 'time B', got {line!r}") from None
                    # a header line before the data
    except OSError as exc:
        raise UsageError(f"cannot read protocol table {path}: {exc.strerror}") from exc
    if not rows:
        raise UsageError(f"{path}: no (time, B) rows")
    t, b = zip(*rows)
    try:
        return Protocol.table(t, b)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _protocol(config):
    from .langevin.trajectory import Protocol

    tc = config.trajectory
    b0 = config.params.omegac
    if tc.protocol == "constant":
        return Protocol.constant(b0 if tc.b_start is None else tc.b_start)
    if tc.protocol == "linear":
        return Protocol.linear(
            b0 if tc.b_start is None else tc.b_start,
            b0 if tc.b_end is None else tc.b_end,
            tc.t_end if tc.t_ramp is None else tc.t_ramp,
        )
    return _load_protocol_table(tc.table)


def _trajectory(config):
    from .langevin.trajectory import max_time_step, quasiclassical_trajectory, run_ensemble

    p = config.params
    tc = config.trajectory
    protocol = _protocol(config)
    dt = tc.dt if tc.dt is not None else max_time_step(p, protocol)
    md = {
        "protocol": protocol.name,
        "protocol_times": " ".join(repr(v) for v in protocol.times),
        "protocol_fields": " ".join(repr(v) for v in protocol.values),
        "seed": tc.seed,
        "dt": dt,
        "t_end": tc.t_end,
        "t_burn": tc.t_burn,
        "n_traj": tc.n_traj,
    }
    if tc.n_traj == 1:
        r = quasiclassical_trajectory(p, protocol, seed=tc.seed, dt=dt, t_end=tc.t_end, t_burn=tc.t_burn)
        table = OutputTable(["t", "B", "x", "y", "v_x", "v_y", "energy", "magnetic_moment", "work", "heat"],
                            plot=("t", "energy"))
        # cumulative work and heat since the start of the record
        work = np.concatenate([[0.0], np.cumsum(r.d_work)])
        heat = np.concatenate([[0.0], np.cumsum(r.d_heat)])
        energy, moment = r.energy, r.magnetic_moment
        for k in range(0, len(r.time), tc.stride):
            table.add(r.time[k], r.field[k], *r.states[k], energy[k], moment[k], work[k], heat[k])
        md["stride"] = tc.stride
        md["max_relative_first_law_residual"] = float(r.relative_residual.max()) if r.d_work.size else 0.0
    else:
        s = run_ensemble(p, protocol, n_traj=tc.n_traj, seed=tc.seed, dt=dt, t_end=tc.t_end, t_burn=tc.t_burn)
        table = OutputTable(["trajectory", "mean_energy", "work", "heat", "delta_energy"], plot=("trajectory", "work"))
        for i in range(s.n_traj):
            table.add(i, s.mean_energy[i], s.work[i], s.heat[i], s.d_energy[i])
        e, e_se = s.energy_estimate()
        w, w_se = s.work_estimate()
        md.update({"ensemble_energy": e, "ensemble_energy_se": e_se, "ensemble_work": w, "ensemble_work_se": w_se,
                   "max_relative_first_law_residual": s.max_first_law_residual})
    table.metadata.update(md)
    return table


def _validate(config):
    from .validation import run_checks

    table = OutputTable(["check", "value", "tolerance", "status"])
    failed = 0
    for c in run_checks(config.params):
        table.add(c.name, c.value, c.tolerance, c.status)
        failed += c.status == "fail"
    table.metadata["failed_checks"] = failed
    return table, (EXIT_FAILURE if failed else EXIT_OK)


_DISPATCH = {
    "state": _state,
    "cycle": _cycle,
    "sweep": _sweep,
    "langevin-moments": _moments,
    "langevin-traj": _trajectory,
    "validate": _validate,
}


def run(config: RunConfig) -> tuple[OutputTable, int]:
    """Execute ``config.command`` and return the table and an exit status.

    Computation errors propagate; sweeps and ``validate`` report per-row
    failures in the table and return status 1.
    """
    out = _DISPATCH[config.command](config)
    table, status = out if isinstance(out, tuple) else (out, EXIT_OK)
    md = _metadata(config)
    md.update(table.metadata)
    if config.timestamp:
        md["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    table.metadata = md
    return table, status


# ---------------------------------------------------------------- emitters


def _text(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def _emit_csv(table):
    buf = io.StringIO()
    for k, v in table.metadata.items():
        buf.write(f"# {k}: {_text(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_text(v) for v in row])
    return buf.getvalue()


def _emit_json(table):
    obj = {
        "metadata": {k: _json_value(v) for k, v in table.metadata.items()},
        "columns": list(table.columns),
        "rows": [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows],
    }
    return json.dumps(obj, indent=1) + "\n"


def _plot_text(v):
    if v is None:
        return "nan"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, str):
        return '"' + v.replace('"', "'") + '"'
    return _text(v)


def _blocks(table):
    key_idx = [table.columns.index(k) for k in table.block_key if k in table.columns]
    blocks, current, last = [], [], object()
    for row in table.rows:
        key = tuple(row[i] for i in key_idx)
        if current and key != last:
            blocks.append(current)
            current = []
        current.append(row)
        last = key
    if current:
        blocks.append(current)
    return blocks


def _emit_plotdata(table):
    out = [f"# {k}: {_text(v)}" for k, v in table.metadata.items()]
    out.append("# " + " ".join(table.columns))
    blocks = _blocks(table)
    for i, block in enumerate(blocks):
        if i:
            out.extend(["", ""])
        if table.block_key:
            label = " ".join(f"{k}={_text(block[0][table.columns.index(k)])}" for k in table.block_key)
            out.append(f"# block {i}: {label}")
        out.extend(" ".join(_plot_text(v) for v in row) for row in block)
    return "\n".join(out) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _emit_svg(table, width=640, height=420):
    if table.plot is None:
        raise UsageError("svg output is only available for sweep and trajectory tables")
    xi, yi = (table.columns.index(c) for c in table.plot)
    series = []
    for block in _blocks(table):
        pts = [(float(r[xi]), float(r[yi])) for r in block if r[yi] is not None and r[xi] is not None]
        pts = [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
        label = ", ".join(f"{k}={_text(block[0][table.columns.index(k)])}" for k in table.block_key
                          if len({r[table.columns.index(k)] for r in table.rows}) > 1)
        series.append((label, pts))
    allpts = [p for _, pts in series for p in pts]
    m = 60
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if allpts:
        xs, ys = zip(*allpts)
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        x1 = x1 if x1 > x0 else x0 + 1.0
        y1 = y1 if y1 > y0 else y0 + 1.0

        def sx(x):
            return m + (x - x0) / (x1 - x0) * (width - 2 * m)

        def sy(y):
            return height - m - (y - y0) / (y1 - y0) * (height - 2 * m)

        lines.append(f'<path d="M{m},{m} V{height - m} H{width - m}" stroke="black" fill="none"/>')
        for v in (x0, x1):
            lines.append(f'<text x="{sx(v):.1f}" y="{height - m + 16}" text-anchor="middle">{v:.4g}</text>')
        for v in (y0, y1):
            lines.append(f'<text x="{m - 6}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
        for i, (label, pts) in enumerate(series):
            colour = _PALETTE[i % len(_PALETTE)]
            if pts:
                d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
                lines.append(f'<polyline points="{d}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
            if label:
                lines.append(f'<text x="{width - m + 4}" y="{m + 14 * i}" fill="{colour}">{label}</text>')
    lines.append(f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle">{table.plot[0]}</text>')
    lines.append(f'<text x="16" y="{height / 2:.0f}" transform="rotate(-90 16 {height / 2:.0f})" text-anchor="middle">{table.plot[1]}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_EMITTERS = {"csv": _emit_csv, "json": _emit_json, "plotdata": _emit_plotdata, "svg": _emit_svg}


def emit(table: OutputTable, fmt: str = "csv") -> bytes:
    """Serialise ``table`` as ``fmt`` (csv, json, plotdata or svg)."""
    if fmt not in _EMITTERS:
        raise UsageError(f"unknown format {fmt!r}")
    return _EMITTERS[fmt](table).encode("utf-8")


def write_output(data: bytes, path: str | None):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"ericsson: usage error: {exc}", file=sys.stderr)
        print("run 'ericsson --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    try:
        table, status = run(config)
        data = emit(table, config.output_format)
        write_output(data, config.output_path)
    except UsageError as exc:
        print(f"ericsson: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ericsson: invalid {exc.field}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepSizeError as exc:
        print(f"ericsson: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EricssonError, ArithmeticError, ValueError, OSError) as exc:
        print(f"ericsson: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return status


if __name__ == "__main__":
    sys.exit(main())
