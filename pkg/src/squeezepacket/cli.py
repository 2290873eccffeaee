"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 numerical verification failure
(or a packet leaving the grid in ``--strict`` mode).

Settings are resolved as flag > ``--config`` JSON file > built-in default.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys as _sys
from dataclasses import dataclass, field, fields

import numpy as np

from .core import (
    CorrSign,
    GridTooNarrow,
    InitialGaussian,
    PacketError,
    SystemKind,
    SystemParams,
    Tolerances,
    delta,
    validate_initial,
)
from .dynamics import classical_trajectory, contractive_analysis, moments_closed_form
from .oracle import oracle_contractive_min
from .squeeze import coherent_alpha, solve_squeeze
from .verify import run_checks
from .wavepacket import GridSpec, auto_grid, evaluate_packet, grid_moments

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
MOMENT_COLUMNS = ["t", "x_c", "p_c", "var_x", "var_p", "cov_xp", "S_c"]
WAVE_COLUMNS = ["x", "re_psi", "im_psi", "abs2"]


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    kind: str = "free"
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    x0: float = 0.0
    p0: float = 0.0
    dx0: float = 1.0
    dp0: float = 1.0
    sign: str = "+"
    xmin: float | None = None
    xmax: float | None = None
    n: int | None = None
    format: str = "csv"
    precision: int = 17
    tolerances: dict = field(default_factory=dict)

    def system(self) -> SystemParams:
        kind = {"free": SystemKind.FREE_MASS, "osc": SystemKind.OSCILLATOR}.get(self.kind)
        if kind is None:
            raise InputError(f"unknown system {self.kind!r}; use 'free' or 'osc'")
        return SystemParams(kind, mass=self.mass, omega=self.omega, hbar=self.hbar)

    def initial(self) -> InitialGaussian:
        sign = {"+": CorrSign.PLUS, "-": CorrSign.MINUS, "plus": CorrSign.PLUS, "minus": CorrSign.MINUS}
        if self.sign not in sign:
            raise InputError(f"unknown sign {self.sign!r}; use '+' or '-'")
        return InitialGaussian(self.x0, self.p0, self.dx0, self.dp0, sign[self.sign])

    def tol(self) -> Tolerances:
        try:
            return Tolerances(**self.tolerances)
        except TypeError as exc:
            raise InputError(f"bad tolerances block: {exc}") from None


_CONFIG_BLOCKS = {
    "system": {"kind": "kind", "mass": "mass", "omega": "omega", "hbar": "hbar"},
    "initial": {"x0": "x0", "p0": "p0", "dx0": "dx0", "dp0": "dp0", "sign": "sign"},
    "grid": {"xmin": "xmin", "xmax": "xmax", "n": "n"},
}


def load_config(path: str | None, args: argparse.Namespace, **defaults) -> RunConfig:
    cfg = RunConfig(**defaults)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}") from None
        for block, keys in _CONFIG_BLOCKS.items():
            for key, value in doc.get(block, {}).items():
                if key not in keys:
                    raise InputError(f"unknown key {block}.{key} in config")
                setattr(cfg, keys[key], value)
        for key in ("format", "precision", "tolerances"):
            if key in doc:
                setattr(cfg, key, doc[key])
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    if cfg.format not in ("csv", "json"):
        raise InputError(f"format must be csv or json, got {cfg.format!r}")
    if int(cfg.precision) < 1:
        raise InputError("precision must be >= 1")
    return cfg


class Writer:
    """Fixed-precision, locale-independent number formatting."""

    def __init__(self, cfg: RunConfig, out=None):
        self.fmt = cfg.format
        self.precision = int(cfg.precision)
        self.out = out or _sys.stdout

    def num(self, v) -> str:
        return format(float(v), f".{self.precision}g")

    def jnum(self, v) -> float:
        v = float(self.num(v))
        return 0.0 if v == 0.0 else v

    def table(self, columns, rows, meta=None):
        if self.fmt == "csv":
            w = csv.writer(self.out, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([self.num(v) for v in row])
            for key, value in (meta or {}).items():
                self.out.write(f"# {key}={value if isinstance(value, str) else self.num(value)}\n")
        else:
            doc = {"rows": [dict(zip(columns, (self.jnum(v) for v in row))) for row in rows]}
            if meta:
                doc["meta"] = {k: (v if isinstance(v, str) else self.jnum(v)) for k, v in meta.items()}
            self.out.write(json.dumps(doc, indent=1) + "\n")

    def record(self, values: dict):
        self.table(list(values), [list(values.values())])


def _moment_dict(ms) -> dict:
    return {"mean_x": ms.mean_x, "mean_p": ms.mean_p, "var_x": ms.var_x, "var_p": ms.var_p, "cov_xp": ms.cov_xp}


def cmd_params(cfg: RunConfig, out=None) -> int:
    sys, init = cfg.system(), validate_initial(cfg.system(), cfg.initial())
    sq = solve_squeeze(sys, init)
    alpha = coherent_alpha(sys, sq, init.x0, init.p0).alpha
    rec = {"delta": delta(sys, init), "r": sq.r, "theta": sq.theta, "alpha_re": alpha.real, "alpha_im": alpha.imag}
    rec.update(_moment_dict(moments_closed_form(sys, init, 0.0)))
    Writer(cfg, out).record(rec)
    return EXIT_OK


def cmd_moments(cfg: RunConfig, t0: float, t1: float, steps: int, out=None) -> int:
    if t1 < t0:
        raise InputError("need t1 >= t0")
    if steps < 1:
        raise InputError("need steps >= 1")
    sys, init = cfg.system(), validate_initial(cfg.system(), cfg.initial())
    ts = np.linspace(t0, t1, steps) if steps > 1 else np.array([t0])
    mo = moments_closed_form(sys, init, ts)
    cl = classical_trajectory(sys, init.x0, init.p0, ts)
    cols = [ts, mo.mean_x, mo.mean_p, mo.var_x, mo.var_p, mo.cov_xp, cl.S_c]
    rows = np.column_stack([np.broadcast_to(c, ts.shape) for c in cols])
    Writer(cfg, out).table(MOMENT_COLUMNS, rows.tolist())
    return EXIT_OK


def cmd_wavefield(cfg: RunConfig, t: float, strict: bool = False, out=None) -> int:
    sys, init = cfg.system(), validate_initial(cfg.system(), cfg.initial())
    grid = auto_grid(sys, init, max(t, 0.0), t_min=min(t, 0.0))
    grid = GridSpec(
        cfg.xmin if cfg.xmin is not None else grid.x_min,
        cfg.xmax if cfg.xmax is not None else grid.x_max,
        int(cfg.n) if cfg.n is not None else grid.n,
    )
    wf = evaluate_packet(sys, init, t, grid, strict=strict)
    psi = wf.values
    rows = np.column_stack([grid.x, psi.real, psi.imag, np.abs(psi) ** 2]).tolist()
    meta = {"t": t, "norm": wf.norm(), "x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n}
    try:
        meta.update(_moment_dict(grid_moments(wf, sys.hbar, norm_eps=1e-6)))
    except PacketError as exc:
        meta["moments"] = f"unavailable: {exc}"
    Writer(cfg, out).table(WAVE_COLUMNS, rows, meta)
    return EXIT_OK


def cmd_contractive(cfg: RunConfig, oracle: bool = False, samples: int = 801, out=None) -> int:
    sys, init = cfg.system(), cfg.initial()
    res = contractive_analysis(sys, init)
    rec = {"tau": res.tau, "var_min": res.var_min, "t_return": res.t_return}
    status = EXIT_OK
    if oracle:
        om = oracle_contractive_min(sys, init, res.t_return, samples)
        rec.update({"t_star": om.t_star, "var_star": om.var_star})
        step = res.t_return / (samples - 1)
        if abs(om.var_star - res.var_min) >= 1e-4 or abs(om.t_star - res.tau) > step:
            status = EXIT_NUMERIC
    Writer(cfg, out).record(rec)
    if status:
        print("FAILED: oracle minimum disagrees with the exact contractive minimum", file=_sys.stderr)
    return status


def cmd_verify(cfg: RunConfig, level: str = "quick", out=None) -> int:
    out = out or _sys.stdout
    results = run_checks(cfg.system(), cfg.initial(), cfg.tol(), level)
    writer = Writer(cfg, out)
    if cfg.format == "json":
        doc = [{"check": r.name, "passed": r.passed, "value": writer.jnum(r.value), "limit": writer.jnum(r.limit)}
               for r in results]
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "status", "value", "limit"])
        for r in results:
            w.writerow([r.name, "pass" if r.passed else "FAIL", writer.num(r.value), writer.num(r.limit)])
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"FAILED: {failed[0].name}", file=_sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--system", dest="kind", choices=["free", "osc"])
    p.add_argument("--mass", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--hbar", type=float)
    p.add_argument("--x0", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--dx0", type=float)
    p.add_argument("--dp0", type=float)
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--precision", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="squeezepacket", description="Travelling general Gaussian wave packets")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="squeeze parameters, coherent amplitude and t=0 moments")
    _common(p)

    p = sub.add_parser("moments", help="moments along a time grid (CSV/JSON)")
    _common(p)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, help="defaults to t0")
    p.add_argument("--steps", type=int, default=1, help="number of samples from t0 to t1")

    p = sub.add_parser("wavefield", help="sampled wavefunction at time t")
    _common(p)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--strict", action="store_true", help="fail (exit 2) if the packet reaches the grid edge")

    p = sub.add_parser("contractive", help="free-mass contractive-state minimum (default sign '-')")
    _common(p)
    p.add_argument("--oracle", action="store_true", help="also locate the minimum with the split-step oracle")
    p.add_argument("--samples", type=int, default=801)

    p = sub.add_parser("verify", help="run the numerical self-checks")
    _common(p)
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        defaults = {"sign": "-"} if args.command == "contractive" else {}
        cfg = load_config(args.config, args, **defaults)
        if args.command == "params":
            return cmd_params(cfg)
        if args.command == "moments":
            return cmd_moments(cfg, args.t0, args.t0 if args.t1 is None else args.t1, args.steps)
        if args.command == "wavefield":
            return cmd_wavefield(cfg, args.t, strict=args.strict)
        if args.command == "contractive":
            return cmd_contractive(cfg, oracle=args.oracle, samples=args.samples)
        return cmd_verify(cfg, args.level)
    except GridTooNarrow as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_NUMERIC
    except (PacketError, InputError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    _sys.exit(main())
