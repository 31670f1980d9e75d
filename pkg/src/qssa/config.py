"""Scenario configuration: flat ``key = value`` files and shipped presets.

Example::

    # Segel (1988) parameter set
    rates.k1 = 4e6
    rates.k_minus1 = 25
    rates.k2 = 15
    init.s0 = 1e-5
    init.e0 = 1e-8
    time.t_end = 5*t2

``time.t_end`` accepts a number or ``[factor*]name`` where ``name`` is one of
``t1``, ``t2`` (the pair of the classified regime) or ``t1_s``, ``t2_s``,
``t1_r``, ``t2_r``. The SIR model (``model = sir``) uses ``sir.beta``,
``sir.gamma`` and ``sir.n0`` instead of rates and initial state.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, NotApplicableError, QSSAError
from .kinetics import (
    DEFAULT_EPS_HI,
    DEFAULT_EPS_LO,
    DerivedConstants,
    InitialState,
    RateConstants,
    Regime,
    classify_regime,
    derive_constants,
    regime_time_scales,
)

PRESETS_ENV = "QSSA_PRESETS_DIR"
PACKAGE_PRESETS = Path(__file__).with_name("presets")

_FLOAT_KEYS = {
    "rates.k1", "rates.k_minus1", "rates.k2",
    "init.s0", "init.e0", "init.c0", "init.p0",
    "solver.rel_tol", "solver.abs_tol",
    "regime.eps_lo", "regime.eps_hi",
    "sir.beta", "sir.gamma", "sir.n0",
}
_STR_KEYS = {"model", "name", "time.t_end", "output.dir", "grid.kind"}
_INT_KEYS = {"grid.count"}
KNOWN_KEYS = _FLOAT_KEYS | _STR_KEYS | _INT_KEYS

_T_END_RE = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?(t1|t2|t1_s|t2_s|t1_r|t2_r)\s*$")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in _FLOAT_KEYS:
            try:
                out[key] = float(value)
            except ValueError:
                raise ConfigError(f"{source}:{lineno}: {key} must be a number, got {value!r}") from None
        elif key in _INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError:
                raise ConfigError(f"{source}:{lineno}: {key} must be an integer, got {value!r}") from None
        else:
            out[key] = value
    return out


def presets_dir() -> Path:
    env = os.environ.get(PRESETS_ENV)
    return Path(env) if env else PACKAGE_PRESETS


def load_preset(name: str) -> dict:
    path = presets_dir() / f"{name}.cfg"
    if not path.is_file():
        raise ConfigError(f"preset {name!r} not found in {path.parent}")
    return parse_config_text(path.read_text(), str(path))


@dataclass(frozen=True)
class GridSpec:
    kind: str = "log"
    count: int = 2000

    def __post_init__(self):
        if self.kind not in ("log", "linear"):
            raise ConfigError(f"grid.kind must be 'log' or 'linear', got {self.kind!r}")
        if self.count < 1:
            raise ConfigError("grid.count must be >= 1")

    def times(self, t_end: float, t_fast: float) -> np.ndarray:
        """``count`` positive sample times ending at ``t_end``, with ``t = 0`` prepended."""
        if self.kind == "linear":
            return np.linspace(0.0, t_end, self.count + 1)
        start = t_fast / 100.0
        if not start < t_end:
            start = t_end / 1e3
        pos = np.geomspace(start, t_end, self.count)
        pos[-1] = t_end
        return np.concatenate(([0.0], pos))


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario; build one with :func:`build_config`."""

    name: str
    model: str
    raw: dict
    rates: Optional[RateConstants] = None
    init: Optional[InitialState] = None
    t_end_spec: str = "5*t2"
    rel_tol: float = 1e-10
    abs_tol: Optional[float] = None
    eps_lo: float = DEFAULT_EPS_LO
    eps_hi: float = DEFAULT_EPS_HI
    out_dir: Optional[str] = None
    grid: GridSpec = field(default_factory=GridSpec)
    sir: Optional[tuple[float, float, float]] = None

    @property
    def dc(self) -> DerivedConstants:
        return derive_constants(self.rates, self.init)

    def regime(self) -> Regime:
        return classify_regime(self.dc, self.eps_lo, self.eps_hi)

    def named_time_scales(self) -> dict:
        dc = self.dc
        names = {"t1_s": dc.t1_s, "t2_s": dc.t2_s, "t1_r": dc.t1_r, "t2_r": dc.t2_r}
        try:
            names["t1"], names["t2"] = regime_time_scales(dc, self.regime())
        except NotApplicableError:
            names["t1"], names["t2"] = None, None
        return names

    def t_end(self) -> float:
        spec = self.t_end_spec
        try:
            value = float(spec)
        except ValueError:
            m = _T_END_RE.match(spec)
            if not m:
                raise ConfigError(f"cannot parse time.t_end = {spec!r}") from None
            factor = float(m.group(1)) if m.group(1) else 1.0
            scale = self.named_time_scales()[m.group(2)]
            if scale is None:
                raise ConfigError(f"time scale {m.group(2)!r} is undefined for this scenario")
            value = factor * scale
        if not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"time.t_end must be positive, got {value!r}")
        return value

    def fast_time_scale(self) -> float:
        names = self.named_time_scales()
        if names["t1"] is not None:
            return names["t1"]
        return min(v for v in (names["t1_s"], names["t1_r"]) if v is not None and v > 0)

    def sample_times(self) -> np.ndarray:
        return self.grid.times(self.t_end(), self.fast_time_scale())


def build_config(raw: dict, name: str = "custom") -> ScenarioConfig:
    """Validate a parsed key/value mapping into a :class:`ScenarioConfig`."""
    unknown = set(raw) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    model = raw.get("model", "secp")
    name = raw.get("name", name)
    grid = GridSpec(raw.get("grid.kind", "log"), raw.get("grid.count", 2000))
    if model == "sir":
        try:
            sir = (raw["sir.beta"], raw["sir.gamma"], raw["sir.n0"])
        except KeyError as exc:
            raise ConfigError(f"missing key {exc.args[0]!r}") from None
        if not all(v > 0 for v in sir):
            raise ConfigError("sir.beta, sir.gamma and sir.n0 must be positive")
        return ScenarioConfig(name=name, model=model, raw=dict(raw), sir=sir, out_dir=raw.get("output.dir"), grid=grid)
    if model != "secp":
        raise ConfigError(f"model must be 'secp' or 'sir', got {model!r}")
    try:
        rates = RateConstants(raw["rates.k1"], raw["rates.k_minus1"], raw["rates.k2"])
        init = InitialState(raw["init.s0"], raw["init.e0"], raw.get("init.c0", 0.0), raw.get("init.p0", 0.0))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}") from None
    except QSSAError as exc:
        raise ConfigError(str(exc)) from None
    cfg = ScenarioConfig(
        name=name,
        model=model,
        raw=dict(raw),
        rates=rates,
        init=init,
        t_end_spec=raw.get("time.t_end", "5*t2"),
        rel_tol=raw.get("solver.rel_tol", 1e-10),
        abs_tol=raw.get("solver.abs_tol"),
        eps_lo=raw.get("regime.eps_lo", DEFAULT_EPS_LO),
        eps_hi=raw.get("regime.eps_hi", DEFAULT_EPS_HI),
        out_dir=raw.get("output.dir"),
        grid=grid,
    )
    if not (0 < cfg.eps_lo < cfg.eps_hi):
        raise ConfigError("regime thresholds must satisfy 0 < eps_lo < eps_hi")
    if not cfg.rel_tol > 0 or (cfg.abs_tol is not None and not cfg.abs_tol > 0):
        raise ConfigError("solver tolerances must be positive")
    cfg.t_end()
    return cfg


def load_config(path: Optional[str] = None, preset: Optional[str] = None) -> ScenarioConfig:
    """Load a preset, a config file, or a preset overridden by a config file."""
    if path is None and preset is None:
        raise ConfigError("either a config file or a preset is required")
    raw: dict = {}
    name = "custom"
    if preset is not None:
        raw.update(load_preset(preset))
        name = preset
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file {path!r} not found")
        raw.update(parse_config_text(p.read_text(), str(p)))
        if preset is None:
            name = p.stem
    return build_config(raw, name)
