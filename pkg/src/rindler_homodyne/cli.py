"""Command-line driver.

    rindler-homodyne figure fig3 --out fig3.csv
    rindler-homodyne sweep --axis Delta --start 0 --stop 100 --num 11 --omega0 0.1 --delta 0.005
    rindler-homodyne purify --omega 0.1 0.5
    rindler-homodyne guards --omega0 0.6 --delta 0.24 --v-c 0.577 --k-wid 1e6 --Delta 10 --alpha 100
    rindler-homodyne selfcheck

Any subcommand accepts ``--config file.json``; keys are flag names with
dashes or underscores.  Explicit flags override the file.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from importlib import metadata
from typing import Sequence

import numpy as np

from .errors import NonConvergenceError, RindlerHomodyneError
from .figures import FIGURES, Table, run_figure

EXIT_OK, EXIT_VALIDATION, EXIT_NONCONVERGENCE, EXIT_SELFCHECK = 0, 1, 2, 3

TOOL = "rindler_homodyne"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


class ConfigError(RindlerHomodyneError, ValueError):
    """Invalid user configuration; the message names the offending field."""


# --- CSV ------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{float(x):.15e}"


def _param_repr(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ";".join(_param_repr(x) for x in v) + "]"
    return str(v)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# tool: {TOOL} {_version()}\n")
    buf.write(f"# table: {table.name}\n")
    for k in sorted(table.params):
        buf.write(f"# {k} = {_param_repr(table.params[k])}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(table: Table, out: str | None) -> None:
    text = render_csv(table)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


# --- sweep configuration --------------------------------------------------

SWEEP_AXES = ("Delta", "theta", "omega0", "delta", "v_c", "phi", "alpha_mag", "beta_mag",
              "k_med", "k_wid", "a")


@dataclass(frozen=True)
class SweepConfig:
    axis: str
    values: tuple[float, ...]
    scenario: str = "delay"          # delay | mirror | identity
    Delta: float = 0.0
    theta: float = math.pi / 2
    omega0: float = 0.5
    delta: float | None = None       # None: single-frequency mode at omega0
    v_c: float = 0.0
    a: float = 1.0
    k_med: float | None = None
    k_wid: float | None = None
    alpha_mag: float = 1.0
    beta_mag: float = 0.0
    phi: float = 0.0
    purify: bool = False             # set |β| = |α|/coth(2r) at each point
    exact_delay: bool = False
    ir_cutoff: float | None = None
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    jobs: int = 1

    def __post_init__(self):
        errs = []
        if self.axis not in SWEEP_AXES:
            errs.append(f"axis: must be one of {', '.join(SWEEP_AXES)}, got {self.axis!r}")
        if not self.values:
            errs.append("values: at least one sweep point is required")
        if any(not math.isfinite(v) for v in self.values):
            errs.append("values: all sweep points must be finite")
        if self.scenario not in ("delay", "mirror", "identity"):
            errs.append(f"scenario: must be delay, mirror or identity, got {self.scenario!r}")
        if (self.k_med is None) != (self.k_wid is None):
            errs.append("k_med/k_wid: give both or neither")
        if not (self.rel_tol > 0 and self.max_subdivisions >= 1):
            errs.append("rel_tol/max_subdivisions: must be positive")
        if self.jobs < 1:
            errs.append("jobs: must be >= 1")
        if self.purify and self.delta is not None:
            errs.append("purify: only defined for the single-frequency mode (omit delta)")
        for name in ("omega0", "a", "k_med", "k_wid"):
            vals = self.values if self.axis == name else (getattr(self, name),)
            if any(v is not None and v <= 0 for v in vals):
                errs.append(f"{name}: must be > 0")
        if errs:
            raise ConfigError("; ".join(errs))

    @property
    def practical(self) -> bool:
        return self.k_med is not None

    def at(self, value: float) -> "SweepConfig":
        return replace(self, **{self.axis: value}, axis=self.axis, values=(value,))

    def echo(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("values", "jobs")}
        d["values"] = list(self.values)
        return {k: v for k, v in d.items() if v is not None}


def _scenario(cfg: SweepConfig):
    from .scenarios import Identity, Mirror, TimeDelay
    if cfg.scenario == "delay":
        return TimeDelay(cfg.Delta)
    if cfg.scenario == "mirror":
        return Mirror(cfg.theta)
    return Identity()


def sweep_columns(cfg: SweepConfig) -> tuple[str, ...]:
    if cfg.delta is None:
        return (cfg.axis, "V")
    cols = (cfg.axis, "V1", "V2_bar", "theta_sq", "V")
    if cfg.practical:
        cols += ("n_pr", "n_pr0", "x_pr", "v12", "v2_bar_pr", "theta_pr", "v10", "V_pr")
    return cols


def sweep_point(cfg: SweepConfig) -> tuple[float, ...]:
    """All observables for a single-valued config."""
    from .homodyne import (DisplacementConfig, purification_ratio, variance_ideal,
                           variance_single_frequency)
    from .modes import AccelerationFrame, DetectorBand, normalize_wavepacket
    from .numerics import DEFAULT_QUADRATURE, QuadratureSpec
    from .practical import variance_practical

    spec = QuadratureSpec(cfg.rel_tol, DEFAULT_QUADRATURE.abs_tol, cfg.max_subdivisions)
    x = float(getattr(cfg, cfg.axis))
    frame = AccelerationFrame(cfg.a)
    scen = _scenario(cfg)
    beta = cfg.beta_mag
    if cfg.purify:
        beta = cfg.alpha_mag / purification_ratio(cfg.omega0, frame)
    disp = DisplacementConfig(cfg.alpha_mag, cfg.phi, beta)
    if cfg.delta is None:
        return (x, variance_single_frequency(scen, cfg.omega0, frame, disp, cfg.exact_delay))
    mode = normalize_wavepacket(cfg.omega0, cfg.delta, cfg.v_c)
    res = variance_ideal(disp, mode, scen, frame, spec, ir_cutoff=cfg.ir_cutoff)
    row = (x, res.V1, res.V2_bar, res.theta_sq, float(res.V_of_phi(cfg.phi)))
    if cfg.practical:
        band = DetectorBand.from_center(cfg.k_med, cfg.k_wid)
        pr = variance_practical(disp, mode, scen, frame, band, spec, ir_cutoff=cfg.ir_cutoff)
        row += (pr.n_pr, pr.n_pr0, pr.x_pr, pr.v12, pr.v2_bar, pr.theta, pr.v10, pr.variance(cfg.phi))
    return row


def run_sweep(cfg: SweepConfig) -> Table:
    points = [cfg.at(v) for v in cfg.values]
    if cfg.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            rows = list(ex.map(sweep_point, points))  # map keeps input order
    else:
        rows = [sweep_point(p) for p in points]
    return Table("sweep", sweep_columns(cfg), tuple(tuple(r) for r in rows), cfg.echo())


# --- selfcheck ------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def selfcheck_results() -> list[Check]:
    from .homodyne import (DisplacementConfig, purification_ratio, variance_ideal,
                           variance_single_frequency)
    from .modes import AccelerationFrame, normalize_wavepacket, overlap_Ic_Is
    from .numerics import complex_gamma_one_minus_ix
    from .oracle import (FrequencyGrid, GaussianState, apply_scenario, measure_mode_variance)
    from .homodyne import displacement_overlaps
    from .scenarios import Mirror, TimeDelay, correlation_kernel, plateau_kernel, squeeze_decomposition

    frame = AccelerationFrame()
    out = []

    x = np.geomspace(1e-3, 10, 50)
    g = np.abs(complex_gamma_one_minus_ix(x)) ** 2 * np.sinh(np.pi * x) / (np.pi * x)
    out.append(Check("gamma identity |G(1-ix)|^2 sinh(pi x)/(pi x) = 1", float(np.max(np.abs(g - 1))), 1e-12))

    w = np.geomspace(0.05, 5, 50)
    res = 0.0
    for D in (0.1, 1.0, 10.0, 100.0):
        k = correlation_kernel(TimeDelay(D), frame)
        f1, f2 = k.F1(w), k.F2(w)
        res = max(res, float(np.max(np.abs(np.abs(f2) ** 2 - f1 * (1 + f1)))))
    out.append(Check("purity |F2|^2 = F1(1+F1) on 50x4 grid", res, 1e-10))

    res = 0.0
    for D in (0.1, 1.0, 10.0, 100.0):
        f1 = correlation_kernel(TimeDelay(D), frame).F1(w)
        r = squeeze_decomposition(TimeDelay(D), frame).r_sq(w)
        res = max(res, float(np.max(np.abs(np.sinh(r) ** 2 - f1) / np.maximum(1.0, f1))))
    out.append(Check("sinh^2 r = F1 (squeeze magnitude)", res, 1e-10))

    res = 0.0
    for w0, d in ((0.1, 0.005), (0.5, 0.1), (1.0, 0.4)):
        i_c, i_s = overlap_Ic_Is(normalize_wavepacket(w0, d), frame)
        res = max(res, abs(i_c - i_s - 1))
    out.append(Check("I_c - I_s = 1", res, 1e-9))

    pk, mk = plateau_kernel(frame), correlation_kernel(Mirror(math.pi / 2), frame)
    res = max(float(np.max(np.abs(pk.F1(w) - mk.F1(w)))), float(np.max(np.abs(pk.F2(w) - mk.F2(w)))))
    res = max(res, max(abs(variance_single_frequency(TimeDelay(1.0), om, frame)
                           - variance_single_frequency(Mirror(math.pi / 2), om, frame)) for om in w))
    out.append(Check("mirror(pi/2) = time-delay plateau", res, 1e-12))

    res = 0.0
    for om in (0.05, 0.1, 0.5, 1.0, 2.0):
        for th in (0.3, math.pi / 2, 2.5):
            beta = 1.0 / purification_ratio(om, frame)
            v = variance_single_frequency(Mirror(th), om, frame, DisplacementConfig(1.0, 0.0, beta))
            res = max(res, abs(v - 1))
    out.append(Check("purification ratio gives V = 1", res, 1e-10))

    res = 0.0
    for w0, d, D in ((0.5, 0.1, 1.0), (0.5, 0.1, 5.0), (0.8, 0.2, 3.0)):
        mode = normalize_wavepacket(w0, d)
        cfg = DisplacementConfig()
        grid = FrequencyGrid.for_packet(w0, d, 200)
        st = apply_scenario(GaussianState.vacuum(2 * grid.size), TimeDelay(D), grid, frame)
        g_c, g_d = displacement_overlaps(cfg, mode, frame)
        _, v_or = measure_mode_variance(st, grid, g_c(grid.points), g_d(grid.points), 0.0)
        v_an = variance_ideal(cfg, mode, TimeDelay(D), frame).V
        res = max(res, abs(v_or - v_an) / v_an)
    out.append(Check("oracle vs semi-analytic variance (relative)", res, 1e-2))
    return out


# --- argument handling ----------------------------------------------------

def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config: {path} is not valid JSON ({e.msg} at line {e.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _merge(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Config-file values, overridden by any flag given explicitly."""
    file_vals = _load_config(getattr(args, "config", None))
    known = {a.dest for a in parser._actions}
    unknown = sorted(set(file_vals) - known)
    if unknown:
        raise ConfigError(f"config: unknown keys {', '.join(unknown)}")
    merged = {}
    for dest in sorted(known - {"help", "config", "command"}):
        v = getattr(args, dest, None)
        merged[dest] = file_vals[dest] if v is None and dest in file_vals else v
    return merged


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default values for any flag")
    p.add_argument("--a", type=float, default=None, help="acceleration (default 1)")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rindler-homodyne", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.set_defaults(_subparsers=sub.choices)

    # defaults are None everywhere so that an unset flag can fall back on the config file
    p = sub.add_parser("figure", help="write the data behind one figure")
    p.add_argument("name", nargs="?", default=None, help=", ".join(FIGURES))
    _add_common(p)

    p = sub.add_parser("sweep", help="one-axis parameter sweep")
    _add_common(p)
    p.add_argument("--axis")
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--num", type=int)
    p.add_argument("--log", action="store_const", const=True, help="geometric spacing")
    p.add_argument("--scenario", choices=("delay", "mirror", "identity"))
    p.add_argument("--Delta", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--delta", type=float, help="packet width; omit for a single-frequency mode")
    p.add_argument("--v-c", dest="v_c", type=float)
    p.add_argument("--k-med", dest="k_med", type=float)
    p.add_argument("--k-wid", dest="k_wid", type=float)
    p.add_argument("--alpha", dest="alpha_mag", type=float)
    p.add_argument("--beta", dest="beta_mag", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--purify", action="store_const", const=True)
    p.add_argument("--exact-delay", dest="exact_delay", action="store_const", const=True)
    p.add_argument("--ir-cutoff", dest="ir_cutoff", type=float)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--max-subdivisions", dest="max_subdivisions", type=int)
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("purify", help="purification ratio and residual variance per frequency")
    _add_common(p)
    p.add_argument("--omega", type=float, nargs="+")
    p.add_argument("--theta", type=float)

    p = sub.add_parser("guards", help="report the validity conditions for a practical run")
    _add_common(p)
    p.add_argument("--omega0", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--v-c", dest="v_c", type=float)
    p.add_argument("--k-med", dest="k_med", type=float)
    p.add_argument("--k-wid", dest="k_wid", type=float)
    p.add_argument("--Delta", type=float)
    p.add_argument("--alpha", dest="alpha_mag", type=float)

    p = sub.add_parser("selfcheck", help="run the analytic identity suite")
    p.add_argument("--config", help=argparse.SUPPRESS)
    return parser


def _sweep_config(v: dict) -> SweepConfig:
    if v.get("values") is not None:
        values = tuple(float(x) for x in v["values"])
    else:
        missing = [k for k in ("start", "stop", "num") if v.get(k) is None]
        if missing:
            raise ConfigError(f"{', '.join(missing)}: required unless --values is given")
        if v["num"] < 1:
            raise ConfigError("num: must be >= 1")
        if v.get("log"):
            if v["start"] <= 0 or v["stop"] <= 0:
                raise ConfigError("start/stop: must be > 0 with --log")
            values = tuple(np.geomspace(v["start"], v["stop"], v["num"]).tolist())
        else:
            values = tuple(np.linspace(v["start"], v["stop"], v["num"]).tolist())
    if v.get("axis") is None:
        raise ConfigError("axis: required")
    kw = {f.name: v[f.name] for f in fields(SweepConfig)
          if f.name not in ("axis", "values") and v.get(f.name) is not None}
    try:
        return SweepConfig(axis=v["axis"], values=values, **kw)
    except TypeError as e:
        raise ConfigError(str(e)) from None


def _cmd_figure(v: dict) -> Table:
    if v.get("name") is None:
        raise ConfigError(f"name: required, one of {', '.join(FIGURES)}")
    if v["name"] not in FIGURES:
        raise ConfigError(f"name: unknown figure {v['name']!r}; choose from {', '.join(FIGURES)}")
    return run_figure(v["name"], v.get("a") or 1.0)


def _cmd_purify(v: dict) -> Table:
    from .homodyne import (DisplacementConfig, purification_equal_amplitude, purification_ratio,
                           variance_single_frequency)
    from .modes import AccelerationFrame
    from .scenarios import Mirror

    frame = AccelerationFrame(v.get("a") or 1.0)
    theta = math.pi / 2 if v.get("theta") is None else v["theta"]
    omegas = v.get("omega") or [0.1, 0.5, 1.0]
    rows = []
    for om in omegas:
        ratio = purification_ratio(om, frame)
        vp = variance_single_frequency(Mirror(theta), om, frame, DisplacementConfig(1.0, 0.0, 1.0 / ratio))
        rows.append((om, ratio, vp, purification_equal_amplitude(om, frame, theta)))
    return Table("purify", ("omega", "ratio", "V_purified", "V_equal_amplitude"), tuple(rows),
                 {"a": frame.a, "theta": theta})


def _cmd_guards(v: dict) -> Table:
    from .homodyne import DisplacementConfig
    from .modes import AccelerationFrame, DetectorBand, WavepacketMode
    from .practical import guard_conditions
    from .scenarios import TimeDelay

    need = [k for k in ("omega0", "delta", "k_wid") if v.get(k) is None]
    if need:
        raise ConfigError(f"{', '.join(need)}: required")
    frame = AccelerationFrame(v.get("a") or 1.0)
    k_med = v.get("k_med") or 1.0
    mode = WavepacketMode(v["omega0"], v["delta"], v.get("v_c") or 0.0)
    band = DetectorBand.from_center(k_med, v["k_wid"])
    rep = guard_conditions(mode, frame, band, TimeDelay(v.get("Delta") or 0.0),
                           DisplacementConfig(v.get("alpha_mag") or 1.0))
    rows = tuple((g.name, str(g.satisfied).lower(), g.value, g.threshold, g.margin) for g in rep.guards)
    params = {"a": frame.a, "omega0": mode.omega0, "delta": mode.delta, "v_c": mode.v_c,
              "k_med": k_med, "k_wid": band.k_wid, "Delta": v.get("Delta") or 0.0,
              "alpha": v.get("alpha_mag") or 1.0}
    return Table("guards", ("guard", "satisfied", "value", "threshold", "margin"), rows, params)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_VALIDATION

    try:
        if args.command == "selfcheck":
            checks = selfcheck_results()
            for c in checks:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: residual {c.residual:.3e} "
                      f"(tolerance {c.tolerance:.1e})")
            ok = all(c.passed for c in checks)
            print("selfcheck " + ("passed" if ok else "FAILED"))
            return EXIT_OK if ok else EXIT_SELFCHECK

        v = _merge(args, args._subparsers[args.command])
        if args.command == "figure":
            table = _cmd_figure(v)
        elif args.command == "sweep":
            table = run_sweep(_sweep_config(v))
        elif args.command == "purify":
            table = _cmd_purify(v)
        else:
            table = _cmd_guards(v)
        _emit(table, v.get("out"))
        return EXIT_OK
    except NonConvergenceError as e:
        print(f"error: numerical non-convergence: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, RindlerHomodyneError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
