"""Command-line entry point: ``qssa simulate|approx|compare|scale|stability``.

Every subcommand is also available in-process as ``cmd_<name>(config, out_dir, ...)``;
each returns the list of files it wrote. Output is deterministic: floats are
written with 17 significant digits and files use LF line endings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .approx import (
    FREE,
    INNER_CONSISTENT,
    PRINTED,
    RQSSA,
    SQSSA,
    TOTAL,
    blend,
    rqssa_free,
    rqssa_total,
    sqssa_free,
    sqssa_total,
)
from .config import ScenarioConfig, load_config
from .errors import ConfigError, NotApplicableError, QSSAError
from .kinetics import RegimeKind
from .ode import FULL, integrate
from .scaling import sc_scaling_report, scale_system, sir_bounded_system
from .stability import discriminant, dulac_grid, eigenvalues_at_origin, jacobian

DEFAULT_OUT = "qssa-output"

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

_REGIME_OF_KIND = {RegimeKind.STANDARD: SQSSA, RegimeKind.REVERSE: RQSSA}


# -- formatting --------------------------------------------------------------


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(obj, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or (isinstance(obj, float) and not math.isfinite(obj)):
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return _json_str(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_str(str(k))}: {_json_value(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_json_value(v, indent + 1) for v in obj) + "]"
        items = [pad + _json_value(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json_str(s: str) -> str:
    return json.dumps(s)


def dumps_json(obj) -> str:
    """Serialize ``obj`` as JSON with 17-digit floats; non-finite floats become null."""
    return _json_value(obj, 0) + "\n"


def _atomic_write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def write_json(path: Path, obj) -> Path:
    return _atomic_write(path, dumps_json(obj))


def write_csv(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    rows = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    lines = [",".join(header)]
    lines.extend(",".join(fmt_float(v) for v in row) for row in rows)
    return _atomic_write(path, "\n".join(lines) + "\n")


# -- shared helpers ----------------------------------------------------------


def _require_secp(cfg: ScenarioConfig, command: str):
    if cfg.model != "secp":
        raise ConfigError(f"'{command}' needs model = secp, got {cfg.model!r}")


def _meta(cfg: ScenarioConfig) -> dict:
    dc = cfg.dc
    names = cfg.named_time_scales()
    try:
        regime = cfg.regime().name
    except NotApplicableError:
        regime = None
    return {
        "scenario": cfg.name,
        "model": cfg.model,
        "version": __version__,
        "rates": {"k1": cfg.rates.k1, "k_minus1": cfg.rates.k_minus1, "k2": cfg.rates.k2},
        "init": {"s0": cfg.init.s0, "e0": cfg.init.e0, "c0": cfg.init.c0, "p0": cfg.init.p0},
        "regime": regime,
        "epsilon": dc.epsilon,
        "eta": dc.eta,
        "t1": names["t1"],
        "t2": names["t2"],
        "t_end": cfg.t_end(),
        "derived": dc.as_dict(),
        "grid": {"kind": cfg.grid.kind, "count": cfg.grid.count},
    }


def _oracle(cfg: ScenarioConfig, t):
    return integrate(FULL, cfg.rates, cfg.init, cfg.t_end(), rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, t_eval=t)


def _layers_for(cfg: ScenarioConfig, regime: str, approach: str, variant: str = PRINTED):
    rates, dc, init = cfg.rates, cfg.dc, cfg.init
    if regime == SQSSA:
        return sqssa_free(rates, dc, init) if approach == FREE else sqssa_total(rates, dc, init, variant)
    return rqssa_free(rates, dc, init) if approach == FREE else rqssa_total(rates, dc, init)


def resolve_regime(cfg: ScenarioConfig, requested: Optional[str], force: bool) -> str:
    """Pick the approximation regime, refusing mismatches unless ``force``."""
    regime = cfg.regime()
    classified = _REGIME_OF_KIND.get(regime.kind)
    if requested is None:
        if classified is not None:
            return classified
        if not force:
            raise NotApplicableError(
                f"epsilon = {regime.epsilon:.6g} is in the intermediate range; pass --regime and --force"
            )
        return SQSSA if regime.epsilon <= 1 else RQSSA
    if requested != classified and not force:
        raise NotApplicableError(
            f"scenario is classified as {regime.name} (epsilon = {regime.epsilon:.6g}); "
            f"use --force to evaluate the {requested} approximation anyway"
        )
    return requested


# -- commands ----------------------------------------------------------------


def cmd_simulate(cfg: ScenarioConfig, out_dir) -> list[Path]:
    """Integrate the full system on the sample grid; writes trajectory.csv and meta.json."""
    _require_secp(cfg, "simulate")
    out_dir = Path(out_dir)
    t = cfg.sample_times()
    traj = _oracle(cfg, t)
    meta = _meta(cfg)
    meta["solver"] = {
        "method": "dormand-prince-5(4)",
        "rel_tol": cfg.rel_tol,
        "abs_tol": traj.meta["abs_tol"],
        "steps": traj.steps,
        "rejected": traj.rejected,
        "max_conservation_residual": traj.max_conservation_residual,
    }
    return [
        write_csv(out_dir / "trajectory.csv", ("t", "S", "E", "C", "P"), [traj.t, *traj.y.T]),
        write_json(out_dir / "meta.json", meta),
    ]


def cmd_approx(
    cfg: ScenarioConfig,
    out_dir,
    regime: Optional[str] = None,
    approach: str = FREE,
    variant: str = PRINTED,
    force: bool = False,
) -> list[Path]:
    """Evaluate the inner, outer and uniform layers on the sample grid; writes approx.csv."""
    _require_secp(cfg, "approx")
    if approach not in (FREE, TOTAL):
        raise ConfigError(f"approach must be 'free' or 'total', got {approach!r}")
    chosen = resolve_regime(cfg, regime, force)
    layers = _layers_for(cfg, chosen, approach, variant)
    t = cfg.sample_times()
    x = "S" if approach == FREE else "T"
    header = ["t"]
    cols = [t]
    for suffix, curve in zip(("in", "out", "un"), layers):
        xv, cv = curve(t)
        header += [f"{x}_{suffix}", f"C_{suffix}"]
        cols += [xv, cv]
    return [write_csv(Path(out_dir) / "approx.csv", header, cols)]


def _norms(t, err, lo, hi) -> Optional[dict]:
    mask = (t >= lo) & (t <= hi)
    if mask.sum() < 2 or not hi > lo:
        return None
    te, ee = t[mask], np.abs(err[mask])
    l2 = math.sqrt(float(_trapezoid(ee**2, te)) / (te[-1] - te[0]))
    return {"sup": float(ee.max()), "l2": l2}


def _layer_report(t, oracle_x, oracle_c, curve, window, a1, a4, xname) -> dict:
    xv, cv = curve(t)
    lo, hi = window
    ex = _norms(t, (oracle_x - xv) / a1, lo, hi)
    ec = _norms(t, (oracle_c - cv) / a1, lo, hi)
    ec4 = _norms(t, (oracle_c - cv) / a4, lo, hi)
    return {
        "window": [lo, hi],
        xname: ex,
        "C": ec,
        "C_sup_over_a4": None if ec4 is None else ec4["sup"],
    }


def error_report(cfg: ScenarioConfig) -> dict:
    """Oracle-vs-approximation error norms for every applicable approximation."""
    _require_secp(cfg, "compare")
    dc = cfg.dc
    t = cfg.sample_times()
    t_end = cfg.t_end()
    traj = _oracle(cfg, t)
    s, c = traj["S"], traj["C"]
    report = {
        "scenario": cfg.name,
        "normalization": {"a1": dc.a1, "a4": dc.a4},
        "norms": "sup and time-averaged L2 of (oracle - approximation), divided by a1",
        "regime": None,
        "epsilon": dc.epsilon,
        "approximations": {},
    }
    if dc.a1 <= 0 or dc.a2 <= 0:
        return report
    report["regime"] = cfg.regime().name
    fast = {SQSSA: dc.t1_s, RQSSA: dc.t1_r}
    uniform = {}
    for approach in (FREE, TOTAL):
        ox = s if approach == FREE else s + c
        xname = "S" if approach == FREE else "T"
        for regime in (SQSSA, RQSSA):
            layers = _layers_for(cfg, regime, approach)
            split = min(5.0 * fast[regime], t_end)
            windows = {"inner": (0.0, split), "outer": (split, t_end), "uniform": (0.0, t_end)}
            report["approximations"][f"{regime}.{approach}"] = {
                name: _layer_report(t, ox, c, curve, windows[name], dc.a1, dc.a4, xname)
                for name, curve in zip(("inner", "outer", "uniform"), layers)
            }
            uniform[regime] = layers.uniform
        if approach == TOTAL:
            alt = sqssa_total(cfg.rates, dc, cfg.init, INNER_CONSISTENT).uniform
            report["approximations"][f"{SQSSA}.{TOTAL}.{INNER_CONSISTENT}"] = {
                "uniform": _layer_report(t, ox, c, alt, (0.0, t_end), dc.a1, dc.a4, "T")
            }
        blended = blend(dc.epsilon, uniform[SQSSA], uniform[RQSSA])
        entry = _layer_report(t, ox, c, blended, (0.0, t_end), dc.a1, dc.a4, xname)
        entry["weight"] = blended.weight
        report["approximations"][f"blend.{approach}"] = {"uniform": entry}
    return report


def cmd_compare(cfg: ScenarioConfig, out_dir) -> list[Path]:
    """Write errors.json comparing every approximation with the oracle."""
    return [write_json(Path(out_dir) / "errors.json", error_report(cfg))]


def cmd_scale(cfg: ScenarioConfig, out_dir) -> list[Path]:
    """Write scaling.json: time scales and dimensionless groups of the scenario's system."""
    if cfg.model == "sir":
        beta, gamma, n0 = cfg.sir
        rep = scale_system(sir_bounded_system(beta, gamma, n0))
        payload = {"system": "SIR", "parameters": {"beta": beta, "gamma": gamma, "n0": n0}}
        payload.update(rep.as_dict())
    else:
        payload = sc_scaling_report(cfg.rates, cfg.dc, cfg.regime()).as_dict()
    payload = {"scenario": cfg.name, **payload}
    return [write_json(Path(out_dir) / "scaling.json", payload)]


def cmd_stability(cfg: ScenarioConfig, out_dir) -> list[Path]:
    """Write stability.json: eigenvalues at the origin and a Dulac divergence grid."""
    _require_secp(cfg, "stability")
    dc = cfg.dc
    pair = eigenvalues_at_origin(cfg.rates, dc.a2)
    grid = dulac_grid(cfg.rates, dc.a1, dc.a2, dc.a4) if dc.a1 > 0 else []
    payload = {
        "scenario": cfg.name,
        "jacobian_at_origin": jacobian((0.0, 0.0), cfg.rates, dc.a2).tolist(),
        "discriminant": discriminant(cfg.rates, dc.a2),
        "eigenvalues": {"lambda_plus": pair.lambda_plus, "lambda_minus": pair.lambda_minus},
        "asymptotically_stable": pair.lambda_plus < 0 and pair.lambda_minus < 0,
        "dulac": {
            "function": "1/(s*c)",
            "max_divergence": max((g["divergence"] for g in grid), default=None),
            "grid": grid,
        },
    }
    return [write_json(Path(out_dir) / "stability.json", payload)]


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qssa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file (key = value lines)")
    common.add_argument("--preset", help="shipped preset name, overridden by --config keys")
    common.add_argument("--out", help="output directory")
    common.add_argument("--force", action="store_true", help="evaluate approximations outside their regime")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="integrate the full system")
    ap = sub.add_parser("approx", parents=[common], help="evaluate inner, outer and uniform layers")
    ap.add_argument("--regime", choices=(SQSSA, RQSSA))
    ap.add_argument("--approach", choices=(FREE, TOTAL), default=FREE)
    ap.add_argument("--variant", choices=(PRINTED, INNER_CONSISTENT), default=PRINTED)
    sub.add_parser("compare", parents=[common], help="error norms against the oracle")
    sub.add_parser("scale", parents=[common], help="time scales and dimensionless groups")
    sub.add_parser("stability", parents=[common], help="eigenvalues and Dulac divergence")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.preset)
        out_dir = Path(args.out or cfg.out_dir or DEFAULT_OUT)
        if args.command == "simulate":
            written = cmd_simulate(cfg, out_dir)
        elif args.command == "approx":
            written = cmd_approx(cfg, out_dir, args.regime, args.approach, args.variant, args.force)
        elif args.command == "compare":
            written = cmd_compare(cfg, out_dir)
        elif args.command == "scale":
            written = cmd_scale(cfg, out_dir)
        else:
            written = cmd_stability(cfg, out_dir)
    except (QSSAError, OSError) as exc:
        print(f"qssa: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
