"""Command-line front end: ``tdres <subcommand> [options]``.

Subcommands
-----------
simulate   zero-state response trace (CSV), optional envelope CSV and SVG
sweep      resonance curves (analytic and/or time-domain) and half-power summary
optimize   optimal drive for a kernel, candidate ranking report (JSON)
fourier    resonator-bank harmonic analysis (CSV)
decompose  first-order ZIR/ZSR split (CSV) or Laplace checks (JSON)

Settings come from ``--config file.json`` and are overridden by flags.
Every CSV gets a ``.meta.json`` sidecar and every JSON report carries a
``config`` block; either reloads with :func:`load_config`.

Exit status: 0 success, 2 usage or configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, ConvolutionError, TdresError
from .io import sidecar_path, to_jsonable, write_csv, write_json
from .oscillator import SecondOrderOscillator, impulse_response, oscillator_from_dict
from .quadrature import QuadratureConfig
from .waveform import Waveform, standard_waveform, waveform_from_dict

__all__ = ["RunConfig", "SUBCOMMANDS", "load_config", "build_parser", "main", "run"]

SUBCOMMANDS = ("simulate", "sweep", "optimize", "fourier", "decompose")
KERNELS = ("exact", "normalized", "simplified")
INPUT_KINDS = ("sine", "cosine", "square", "triangle", "pulse", "step")

_DEFAULT_OUTPUTS = {
    "simulate": {"csv": "trace.csv", "envelope": None, "plot": None},
    "sweep": {"prefix": "sweep", "plot": None},
    "optimize": {"report": "optimize.json", "optimal_csv": None},
    "fourier": {"csv": "fourier.csv"},
    "decompose": {"csv": "decompose.csv", "json": "laplace.json"},
}
_DEFAULT_OPTIONS = {
    "simulate": {},
    "sweep": {"method": "both", "from": None, "to": None, "points": 101},
    "optimize": {"candidates": None, "target_norm": 1.0, "kernel_period": None},
    "fourier": {"harmonics": [1, 3, 5], "bank_q": 50.0},
    "decompose": {"mode": "first-order", "a": 1.0, "A": 1.0, "y0": 0.0, "s": None},
}


# --------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Everything one CLI run needs, with defaults resolved."""

    subcommand: str
    oscillator: dict = field(default_factory=lambda: {"q": 10.0, "omega0": 1.0})
    kernel: str = "normalized"
    input: dict | None = None
    dt: float | None = None
    horizon: float | None = None
    quadrature: dict = field(default_factory=lambda: {"rule": "simpson", "points": 256})
    outputs: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return to_jsonable(asdict(self))

    def build_oscillator(self) -> SecondOrderOscillator:
        return oscillator_from_dict(self.oscillator)

    def build_input(self) -> Waveform:
        return build_waveform(self.input)

    def quad(self) -> QuadratureConfig:
        return QuadratureConfig.from_dict(self.quadrature)


def build_waveform(desc: dict) -> Waveform:
    """A flat ``{"kind": .., param: ..}`` descriptor or a full descriptor with ``params``."""
    desc = dict(desc)
    if "params" in desc or "inner" in desc or "terms" in desc:
        return waveform_from_dict(desc)
    kind = desc.pop("kind")
    return standard_waveform(kind, **desc)


def _num(d: dict, key: str, path: str, positive: bool = False, allow_none: bool = True):
    v = d.get(key)
    if v is None:
        if allow_none:
            return None
        raise ConfigError(f"{path}.{key}: required")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {v!r}")
    if not math.isfinite(v) or (positive and not v > 0):
        raise ConfigError(f"{path}.{key}: must be a positive finite number, got {v!r}")
    return float(v)


def _from_raw(raw: dict) -> RunConfig:
    """Schema check with field paths in every message; no defaulting of derived values."""
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a JSON object")
    if "config" in raw and isinstance(raw["config"], dict):
        raw = raw["config"]  # a metadata block emitted by a previous run
    known = {f for f in RunConfig.__dataclass_fields__}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"config: unknown field(s) {sorted(extra)}")
    sub = raw.get("subcommand")
    if sub not in SUBCOMMANDS:
        raise ConfigError(f"subcommand: expected one of {SUBCOMMANDS}, got {sub!r}")
    cfg = RunConfig(sub)
    if "oscillator" in raw:
        if not isinstance(raw["oscillator"], dict):
            raise ConfigError("oscillator: expected an object")
        cfg.oscillator = dict(raw["oscillator"])
    try:
        cfg.build_oscillator()
    except (TdresError, TypeError, ValueError) as exc:
        raise ConfigError(f"oscillator: {exc}") from None
    kernel = raw.get("kernel", cfg.kernel)
    if kernel not in KERNELS:
        raise ConfigError(f"kernel: expected one of {KERNELS}, got {kernel!r}")
    cfg.kernel = kernel
    if raw.get("input") is not None:
        if not isinstance(raw["input"], dict) or "kind" not in raw["input"]:
            raise ConfigError("input: expected an object with a 'kind' field")
        cfg.input = dict(raw["input"])
        try:
            cfg.build_input()
        except (TdresError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"input: {exc}") from None
    cfg.dt = _num(raw, "dt", "config", positive=True)
    cfg.horizon = _num(raw, "horizon", "config", positive=True)
    if "quadrature" in raw:
        try:
            cfg.quadrature = QuadratureConfig.from_dict(raw["quadrature"]).to_dict()
        except (TdresError, TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"quadrature: {exc}") from None
    for name in ("outputs", "options"):
        val = raw.get(name, {})
        if not isinstance(val, dict):
            raise ConfigError(f"{name}: expected an object")
        unknown = set(val) - set((_DEFAULT_OUTPUTS if name == "outputs" else _DEFAULT_OPTIONS)[sub])
        if unknown:
            raise ConfigError(f"{name}: unknown field(s) {sorted(unknown)} for {sub}")
        setattr(cfg, name, copy.deepcopy(val))
    return cfg


def resolve(cfg: RunConfig) -> RunConfig:
    """Fill defaults that depend on the oscillator (dt, horizon, input)."""
    cfg = copy.deepcopy(cfg)
    osc = cfg.build_oscillator()
    cfg.outputs = {**_DEFAULT_OUTPUTS[cfg.subcommand], **cfg.outputs}
    cfg.options = {**copy.deepcopy(_DEFAULT_OPTIONS[cfg.subcommand]), **cfg.options}
    o = cfg.options
    if cfg.input is None:
        if cfg.subcommand == "fourier":
            cfg.input = {"kind": "square", "amplitude": 1.0, "period": 2 * math.pi / osc.omega0}
        else:
            w = osc.omega0 if cfg.kernel == "simplified" else osc.omega_d
            cfg.input = {"kind": "sine", "amplitude": 1.0, "omega": w}
    if cfg.subcommand == "decompose" and o["mode"] == "first-order":
        a = _num(o, "a", "options", positive=True, allow_none=False)
        if cfg.horizon is None:
            cfg.horizon = 10.0 / a
        if cfg.dt is None:
            cfg.dt = cfg.horizon / 1000
    else:
        if cfg.dt is None:
            cfg.dt = osc.t_d / 200
        if cfg.horizon is None:
            cfg.horizon = 12.0 / osc.gamma if osc.gamma > 0 else 20.0 * osc.t_o
    if cfg.subcommand == "sweep":
        if o["from"] is None:
            o["from"] = 0.8 * osc.omega0
        if o["to"] is None:
            o["to"] = 1.2 * osc.omega0
    return cfg


def load_config(path) -> RunConfig:
    """Read, check and resolve a JSON config (or a metadata block from a previous run)."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return resolve(_from_raw(raw))


# --------------------------------------------------------------------------
# argument parsing


def _csv_numbers(text: str, cast=float):
    try:
        return [cast(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdres", description="Time-domain resonance simulator.")
    p.add_argument("--version", action="version", version=f"tdres {__version__}")
    sub = p.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("oscillator")
    g.add_argument("--config", help="JSON config file; flags override it")
    g.add_argument("--q", type=float, help="quality factor Q = omega0/(2 gamma)")
    g.add_argument("--gamma", type=float, help="damping rate gamma (1/s)")
    g.add_argument("--omega0", type=float, help="natural frequency (rad/s), default 1")
    g.add_argument("--R", type=float, help="series resistance")
    g.add_argument("--L", type=float, help="inductance")
    g.add_argument("--C", type=float, help="capacitance")
    g.add_argument("--kernel", choices=KERNELS, help="impulse response flavor")
    n = common.add_argument_group("numerics")
    n.add_argument("--dt", type=float, help="output step (default T_d/200)")
    n.add_argument("--horizon", type=float, help="simulated time span (default 12/gamma)")
    n.add_argument("--rule", choices=("simpson", "trapezoid"), help="quadrature rule")
    n.add_argument("--quad-points", type=int, help="quadrature points per shortest period")
    w = common.add_argument_group("input waveform")
    w.add_argument("--input", choices=INPUT_KINDS, help="drive waveform kind")
    w.add_argument("--amplitude", type=float)
    w.add_argument("--drive-omega", type=float, help="drive angular frequency")
    w.add_argument("--period", type=float, help="drive period (alternative to --drive-omega)")
    w.add_argument("--duty", type=float, help="pulse duty cycle in (0, 1)")
    w.add_argument("--phase", type=float)

    s = sub.add_parser("simulate", parents=[common], help="zero-state response trace")
    s.add_argument("--out", help="trace CSV path (default trace.csv)")
    s.add_argument("--envelope", help="also write extreme samples CSV")
    s.add_argument("--plot", help="also write an SVG plot")

    s = sub.add_parser("sweep", parents=[common], help="resonance curve and bandwidth")
    s.add_argument("--method", choices=("analytic", "lorentzian", "timedomain", "both"))
    s.add_argument("--from", dest="omega_from", type=float, help="first frequency")
    s.add_argument("--to", dest="omega_to", type=float, help="last frequency")
    s.add_argument("--points", type=int, help="number of frequencies")
    s.add_argument("--out", help="output prefix (default 'sweep')")
    s.add_argument("--plot", help="also write an SVG plot")

    s = sub.add_parser("optimize", parents=[common], help="optimal drive and candidate ranking")
    s.add_argument("--candidates", help="JSON list of waveform descriptors (inline or a file path)")
    s.add_argument("--target-norm", type=float)
    s.add_argument("--kernel-period", type=float, help="kernel period (default T_d)")
    s.add_argument("--out", help="report JSON path (default optimize.json)")
    s.add_argument("--optimal-csv", help="also write two periods of the optimal drive")

    s = sub.add_parser("fourier", parents=[common], help="resonator-bank harmonic analysis")
    s.add_argument("--harmonics", type=lambda x: _csv_numbers(x, int), help="e.g. 1,3,5")
    s.add_argument("--bank-q", type=float, help="bank quality factor (>= 10)")
    s.add_argument("--out", help="CSV path (default fourier.csv)")

    s = sub.add_parser("decompose", parents=[common], help="ZIR/ZSR split or Laplace check")
    s.add_argument("--mode", choices=("first-order", "laplace"))
    s.add_argument("--a", type=float, help="first-order rate")
    s.add_argument("--A", dest="A", type=float, help="first-order step amplitude")
    s.add_argument("--y0", type=float, help="first-order initial value")
    s.add_argument("--s", type=_csv_numbers, help="real Laplace points (default gamma,2gamma)")
    s.add_argument("--out", help="CSV (first-order) or JSON (laplace) path")
    return p


def _check_flags(parser, a):
    def bad(flag, msg):
        parser.error(f"argument {flag}: {msg}")

    if a.q is not None and not a.q > 0.5:
        bad("--q", f"Q must exceed 0.5 (underdamped), got {a.q:g}")
    if a.gamma is not None and not a.gamma >= 0:
        bad("--gamma", f"must be >= 0, got {a.gamma:g}")
    if a.omega0 is not None and not a.omega0 > 0:
        bad("--omega0", f"must be positive, got {a.omega0:g}")
    if a.q is not None and a.gamma is not None:
        bad("--gamma", "give either --q or --gamma, not both")
    for flag in ("R", "L", "C"):
        v = getattr(a, flag)
        if v is not None and not (v > 0 or (flag == "R" and v == 0)):
            bad(f"--{flag}", f"must be positive, got {v:g}")
    rlc = [getattr(a, f) is not None for f in ("R", "L", "C")]
    if any(rlc) and not all(rlc):
        bad("--R", "--R, --L and --C must be given together")
    for flag, v in (("--dt", a.dt), ("--horizon", a.horizon),
                    ("--drive-omega", a.drive_omega), ("--period", a.period)):
        if v is not None and not v > 0:
            bad(flag, f"must be positive, got {v:g}")
    if a.quad_points is not None and a.quad_points < 16:
        bad("--quad-points", f"must be >= 16, got {a.quad_points}")
    if a.duty is not None and not 0 < a.duty < 1:
        bad("--duty", f"must lie in (0, 1), got {a.duty:g}")
    sc = a.subcommand
    if sc == "sweep" and a.points is not None and a.points < 3:
        bad("--points", f"need at least 3 frequencies, got {a.points}")
    if sc == "fourier" and a.bank_q is not None and not a.bank_q >= 10:
        bad("--bank-q", f"must be >= 10, got {a.bank_q:g}")
    if sc == "decompose" and a.a is not None and not a.a > 0:
        bad("--a", f"must be positive, got {a.a:g}")


def _merge_flags(raw: dict, a) -> dict:
    raw = copy.deepcopy(raw)
    raw["subcommand"] = a.subcommand
    osc = dict(raw.get("oscillator", {"q": 10.0, "omega0": 1.0}))
    if a.R is not None:
        osc = {"R": a.R, "L": a.L, "C": a.C}
    if a.q is not None:
        osc = {k: v for k, v in osc.items() if k in ("omega0",)}
        osc["q"] = a.q
    if a.gamma is not None:
        osc = {k: v for k, v in osc.items() if k in ("omega0",)}
        osc["gamma"] = a.gamma
    if a.omega0 is not None:
        for k in ("R", "L", "C"):
            osc.pop(k, None)
        if "q" not in osc and "gamma" not in osc:
            osc["q"] = 10.0
        osc["omega0"] = a.omega0
    raw["oscillator"] = osc
    if a.kernel is not None:
        raw["kernel"] = a.kernel
    for k in ("dt", "horizon"):
        if getattr(a, k) is not None:
            raw[k] = getattr(a, k)
    quad = dict(raw.get("quadrature", {}))
    if a.rule is not None:
        quad["rule"] = a.rule
    if a.quad_points is not None:
        quad["points"] = a.quad_points
    if quad:
        raw["quadrature"] = quad

    inp_flags = {"amplitude": a.amplitude, "omega": a.drive_omega, "period": a.period,
                 "duty": a.duty, "phase": a.phase}
    if a.input is not None or any(v is not None for v in inp_flags.values()):
        inp = dict(raw.get("input") or {})
        if a.input is not None and inp.get("kind") != a.input:
            inp = {"kind": a.input}
        inp.setdefault("kind", "sine")
        if a.drive_omega is not None:
            inp.pop("period", None)
        if a.period is not None:
            inp.pop("omega", None)
        inp.update({k: v for k, v in inp_flags.items() if v is not None})
        if inp["kind"] in ("sine", "cosine") and "period" in inp:
            inp["omega"] = 2 * math.pi / inp.pop("period")
        if inp["kind"] in ("sine", "cosine", "square", "triangle", "pulse") \
                and "omega" not in inp and "period" not in inp:
            w0 = oscillator_from_dict(osc) if _osc_ok(osc) else None
            inp["omega"] = w0.omega_d if w0 is not None else 1.0
        raw["input"] = inp

    outputs = dict(raw.get("outputs", {}))
    options = dict(raw.get("options", {}))
    sc = a.subcommand
    if sc == "simulate":
        for flag, key in (("out", "csv"), ("envelope", "envelope"), ("plot", "plot")):
            if getattr(a, flag) is not None:
                outputs[key] = getattr(a, flag)
    elif sc == "sweep":
        for flag, key in (("method", "method"), ("omega_from", "from"), ("omega_to", "to"),
                          ("points", "points")):
            if getattr(a, flag) is not None:
                options[key] = getattr(a, flag)
        if a.out is not None:
            outputs["prefix"] = a.out
        if a.plot is not None:
            outputs["plot"] = a.plot
    elif sc == "optimize":
        if a.candidates is not None:
            options["candidates"] = _read_candidates(a.candidates)
        if a.target_norm is not None:
            options["target_norm"] = a.target_norm
        if a.kernel_period is not None:
            options["kernel_period"] = a.kernel_period
        if a.out is not None:
            outputs["report"] = a.out
        if a.optimal_csv is not None:
            outputs["optimal_csv"] = a.optimal_csv
    elif sc == "fourier":
        if a.harmonics is not None:
            options["harmonics"] = a.harmonics
        if a.bank_q is not None:
            options["bank_q"] = a.bank_q
        if a.out is not None:
            outputs["csv"] = a.out
    elif sc == "decompose":
        for k in ("mode", "a", "A", "y0", "s"):
            if getattr(a, k) is not None:
                options[k] = getattr(a, k)
        if a.out is not None:
            mode = options.get("mode", raw.get("options", {}).get("mode", "first-order"))
            outputs["json" if mode == "laplace" else "csv"] = a.out
    raw["outputs"] = outputs
    raw["options"] = options
    return raw


def _osc_ok(d: dict) -> bool:
    try:
        oscillator_from_dict(d)
        return True
    except TdresError:
        return False


def _read_candidates(text: str):
    src = text
    p = Path(text)
    if not text.lstrip().startswith("[") and p.exists():
        src = p.read_text(encoding="utf-8")
    try:
        val = json.loads(src)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"--candidates: invalid JSON ({exc})") from None
    if not isinstance(val, list):
        raise argparse.ArgumentTypeError("--candidates: expected a JSON list of waveform descriptors")
    return val


# --------------------------------------------------------------------------
# subcommands; each returns a list of (path, writer) pairs, executed at the end


def _kernel(cfg: RunConfig, osc):
    return impulse_response(osc, cfg.kernel)


def _cmd_simulate(cfg: RunConfig):
    from .convolve import extreme_samples, zsr
    from .plot import export_plot

    osc = cfg.build_oscillator()
    h = _kernel(cfg, osc)
    f = cfg.build_input()
    trace = zsr(h, f, cfg.horizon, cfg.dt, cfg.quad())
    meta = {**trace.metadata(), "config": cfg.to_dict()}
    writes = [(cfg.outputs["csv"], lambda p: (write_csv(p, ["t", "f_out"], [trace.times, trace.values]),
                                               write_json(sidecar_path(p), meta)))]
    env = None
    if cfg.outputs.get("envelope") or cfg.outputs.get("plot"):
        k_max = int(math.floor(cfg.horizon / (math.pi / h.omega_d) + 1e-9))
        if k_max >= 1:
            env = extreme_samples(osc, f, k_max, cfg.quad(), kernel=h)
    if cfg.outputs.get("envelope"):
        if env is None:
            raise ConvolutionError("horizon too short for a single extreme sample")
        emeta = {"kernel": h.to_dict(), "input": f.to_dict(), "config": cfg.to_dict()}
        writes.append((cfg.outputs["envelope"], lambda p: env.to_csv(p, emeta)))
    if cfg.outputs.get("plot"):
        series = [("f_out", trace.times, trace.values)]
        if env is not None:
            series.append(("|f_out(t_k)|", env.t, env.magnitudes))
        writes.append((cfg.outputs["plot"], lambda p: export_plot(
            series, p, title=f"zero-state response, Q={osc.q:.4g}", xlabel="t (s)")))
    return writes


def _cmd_sweep(cfg: RunConfig):
    from .freqresp import half_power, resonance_sweep
    from .plot import export_plot

    osc = cfg.build_oscillator()
    o = cfg.options
    w = np.linspace(float(o["from"]), float(o["to"]), int(o["points"]))
    methods = ["analytic", "timedomain"] if o["method"] == "both" else [o["method"]]
    curves = {m: resonance_sweep(osc, w, m, cfg.quad()) for m in methods}
    summary = {"gamma": osc.gamma, "two_gamma": 2 * osc.gamma, "q": osc.q, "config": cfg.to_dict()}
    for m, c in curves.items():
        summary[m] = half_power(c).to_dict()
    prefix = cfg.outputs["prefix"]
    writes = []
    for m, c in curves.items():
        meta = {"method": m, "config": cfg.to_dict()}
        writes.append((f"{prefix}_{m}.csv", lambda p, c=c, meta=meta: (
            c.to_csv(p), write_json(sidecar_path(p), meta))))
    writes.append((f"{prefix}_halfpower.json", lambda p: write_json(p, summary)))
    if cfg.outputs.get("plot"):
        series = [(m, c.frequencies, c.peak_normalized()) for m, c in curves.items()]
        writes.append((cfg.outputs["plot"], lambda p: export_plot(
            series, p, title="resonance curve (peak-normalized)", xlabel="omega (rad/s)",
            ylabel="amplitude / peak")))
    return writes


def _cmd_optimize(cfg: RunConfig):
    from .genopt import choose_generating_interval, optimal_input, optimality_report, rank_inputs

    osc = cfg.build_oscillator()
    h = _kernel(cfg, osc)
    o = cfg.options
    T = o.get("kernel_period") or (2 * math.pi / h.omega_d)
    gi = choose_generating_interval(h, T, cfg.quad())
    descs = o.get("candidates") or [
        {"kind": "square", "amplitude": 1.0, "period": T},
        {"kind": "sine", "amplitude": 1.0, "omega": 2 * math.pi / T},
    ]
    try:
        cands = [build_waveform(s) for s in descs]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"options.candidates: {exc}") from None
    target = float(o["target_norm"])
    ranked = rank_inputs(cands, h, gi, target, cfg.quad())
    best = optimal_input(h, gi, target, cfg.quad())
    opt = optimality_report(best, h, gi, cfg.quad())
    rows = []
    for r in ranked:
        rep = optimality_report(r.waveform, h, gi, cfg.quad())
        rows.append({"index": r.index, "input": descs[r.index], "S_o": r.s0, "bound": rep.bound,
                     "gap_ratio": rep.gap_ratio, "miss_pct": 100 * r.miss,
                     "miss_vs_optimal_pct": 100 * (opt.s0 - r.s0) / opt.s0})
    report = {"generating_interval": gi.to_dict(), "kernel": h.to_dict(),
              "optimal": {"S_o": opt.s0, "bound": opt.bound, "gap_ratio": opt.gap_ratio,
                          "waveform": best.to_dict()},
              "candidates": rows, "config": cfg.to_dict()}
    writes = [(cfg.outputs["report"], lambda p: write_json(p, report))]
    if cfg.outputs.get("optimal_csv"):
        period = best.repeat_period()
        t = np.linspace(0.0, 2 * period, 401)
        meta = {"waveform": best.to_dict(), "config": cfg.to_dict()}
        writes.append((cfg.outputs["optimal_csv"], lambda p: (
            write_csv(p, ["t", "f_inp"], [t, best(t)]), write_json(sidecar_path(p), meta))))
    return writes


def _cmd_fourier(cfg: RunConfig):
    from .fourier_probe import probe_table, write_probe_csv

    f = cfg.build_input()
    table = probe_table(f, cfg.options["harmonics"], float(cfg.options["bank_q"]), cfg.quad())
    meta = {"input": f.to_dict(), "config": cfg.to_dict()}
    return [(cfg.outputs["csv"], lambda p: (write_probe_csv(p, table), write_json(sidecar_path(p), meta)))]


def _cmd_decompose(cfg: RunConfig):
    from .sysdecomp import FirstOrderProblem, first_order_solve, laplace_check

    o = cfg.options
    if o["mode"] == "first-order":
        prob = FirstOrderProblem(float(o["a"]), float(o["A"]), float(o["y0"]))
        n = int(math.floor(cfg.horizon / cfg.dt + 1e-9)) + 1
        sol = first_order_solve(prob, cfg.dt * np.arange(n))
        meta = {"problem": asdict(prob), "config": cfg.to_dict()}
        return [(cfg.outputs["csv"], lambda p: (
            write_csv(p, ["t", "zir", "zsr", "total"], [sol.t, sol.zir, sol.zsr, sol.total]),
            write_json(sidecar_path(p), meta)))]
    if o["mode"] != "laplace":
        raise ConfigError(f"options.mode: expected 'first-order' or 'laplace', got {o['mode']!r}")
    osc = cfg.build_oscillator()
    if cfg.kernel == "simplified":
        raise ConfigError("kernel: Laplace check supports 'exact' and 'normalized'")
    s_values = o.get("s") or [osc.gamma, 2 * osc.gamma]
    f = cfg.build_input()
    checks = [laplace_check(osc, f, s, cfg.quad(), cfg.kernel).to_dict() for s in s_values]
    out = {"checks": checks, "config": cfg.to_dict()}
    return [(cfg.outputs["json"], lambda p: write_json(p, out))]


_COMMANDS = {"simulate": _cmd_simulate, "sweep": _cmd_sweep, "optimize": _cmd_optimize,
             "fourier": _cmd_fourier, "decompose": _cmd_decompose}


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    _check_flags(parser, a)
    try:
        raw = {}
        if a.config:
            if not Path(a.config).exists():
                parser.error(f"argument --config: file not found: {a.config}")
            raw = json.loads(Path(a.config).read_text(encoding="utf-8"))
            if isinstance(raw, dict) and isinstance(raw.get("config"), dict):
                raw = raw["config"]
            if isinstance(raw, dict) and raw.get("subcommand") not in (None, a.subcommand):
                parser.error(f"argument --config: file is for {raw['subcommand']!r}, not {a.subcommand!r}")
        cfg = resolve(_from_raw(_merge_flags(raw, a)))
    except (ConfigError, json.JSONDecodeError, argparse.ArgumentTypeError) as exc:
        parser.error(f"config error: {exc}")
    try:
        writes = _COMMANDS[cfg.subcommand](cfg)
        for path, writer in writes:
            writer(path)
    except ConfigError as exc:
        print(f"tdres: config error: {exc}", file=sys.stderr)
        return 2
    except (TdresError, OSError) as exc:
        print(f"tdres: error: {exc}", file=sys.stderr)
        return 1
    for path, _ in writes:
        print(path)
    return 0


def run(args) -> int:
    """``main`` that returns the exit status instead of raising ``SystemExit``."""
    try:
        return main(list(args))
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
