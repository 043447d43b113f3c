"""Experiment configuration: flat dotted-key text, parsing and validation.

The config format is deliberately primitive: one `key = value` pair per
line, dotted section prefixes (noise.kind, grid.nx, chaos.k, ...), full
blank/comment lines starting with '#'.  It is diffable, language-neutral
and trivially parseable.  `validate` fills defaults, checks every value
(reporting the offending key path) and returns an effective configuration
whose echo re-parses to an equivalent configuration.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

EQUATIONS = (
    "transport",
    "heat",
    "kpz",
    "nlheat",
    "schrodinger-additive",
    "schrodinger-mult",
    "nls",
    "kdv",
    "bo",
)

TIME_NOISE_EQUATIONS = (
    "transport", "heat", "kpz", "schrodinger-additive", "schrodinger-mult", "nls",
)

PROFILES = ("gaussian", "sine", "sech2", "bo-wave", "constant", "zero", "white-noise", "file")

TWO_D_EQUATIONS = ("heat", "kpz", "nlheat", "schrodinger-additive", "schrodinger-mult", "nls")

_KNOWN_KEYS = {
    "equation": str,
    "seed": int,
    "out": str,
    "threads": int,
    "grid.nx": int,
    "grid.ny": int,
    "grid.length": float,
    "grid.length_y": float,
    "chaos.k": int,
    "chaos.n": int,
    "noise.enabled": bool,
    "noise.kind": str,
    "noise.time_extended": bool,
    "noise.gamma": float,
    "noise.nt": int,
    "noise.basis": int,
    "time.t": float,
    "time.dt": float,
    "time.snapshot_every": int,
    "init.profile": str,
    "init.amplitude": float,
    "init.width": float,
    "init.center": float,
    "init.center_y": float,
    "init.k0": float,
    "init.wavenumber": int,
    "init.speed": float,
    "init.s": float,
    "init.gamma": float,
    "init.file": str,
    "eq.sigma": float,
    "eq.p": int,
    "eq.sup_bound": float,
    "oracle.panel": str,
    "oracle.dt": float,
    "mc.samples": int,
}

ORACLE_PANELS = ("per-z", "conservation", "closed-form")


class ConfigError(ValueError):
    """Validation failure; the message names the offending key path."""


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value-string pairs; raises on malformed lines."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.split(" #", 1)[0].strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _convert(key: str, value: str):
    kind = _KNOWN_KEYS[key]
    try:
        if kind is bool:
            if value.lower() in ("true", "1", "yes"):
                return True
            if value.lower() in ("false", "0", "no"):
                return False
            raise ValueError(value)
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}") from None


@dataclass
class ExperimentConfig:
    """Validated, default-filled experiment description."""

    equation: str
    seed: int = 0
    out: str = "out"
    threads: int | None = None
    nx: int = 256
    ny: int | None = None
    length: float = 32.0
    length_y: float | None = None
    chaos_k: int = 2
    chaos_n: int = 2
    noise_enabled: bool = True
    noise_kind: str = "gaussian"
    noise_time_extended: bool = True
    noise_gamma: float = 1.0
    noise_nt: int = 64
    noise_basis: int | None = None
    t_final: float = 0.5
    dt: float = 1e-3
    snapshot_every: int | None = None
    init_profile: str = "gaussian"
    init_amplitude: float = 1.0
    init_width: float = 1.5
    init_center: float | None = None
    init_center_y: float | None = None
    init_k0: float = 0.0
    init_wavenumber: int = 1
    init_speed: float = 1.0
    init_s: float = 1.0
    init_gamma: float = 1.0
    init_file: str | None = None
    sigma: float = 1.0
    p: int = 2
    sup_bound: float = 1e6
    oracle_panel: tuple[str, ...] = ()
    oracle_dt: float | None = None
    mc_samples: int = 8
    warnings: list[str] = field(default_factory=list)

    @property
    def is_2d(self) -> bool:
        return self.ny is not None

    def echo(self) -> str:
        """Effective configuration, re-parseable and diff-stable."""
        pairs = {
            "equation": self.equation,
            "seed": self.seed,
            "out": self.out,
            "grid.nx": self.nx,
            "grid.length": repr(self.length),
            "chaos.k": self.chaos_k,
            "chaos.n": self.chaos_n,
            "noise.enabled": str(self.noise_enabled).lower(),
            "time.t": repr(self.t_final),
            "time.dt": repr(self.dt),
            "init.profile": self.init_profile,
            "init.amplitude": repr(self.init_amplitude),
            "init.width": repr(self.init_width),
            "init.k0": repr(self.init_k0),
            "init.wavenumber": self.init_wavenumber,
            "init.speed": repr(self.init_speed),
            "init.s": repr(self.init_s),
            "init.gamma": repr(self.init_gamma),
            "eq.sigma": repr(self.sigma),
            "eq.p": self.p,
            "eq.sup_bound": repr(self.sup_bound),
            "mc.samples": self.mc_samples,
        }
        if self.threads is not None:
            pairs["threads"] = self.threads
        if self.ny is not None:
            pairs["grid.ny"] = self.ny
            pairs["grid.length_y"] = repr(self.length_y)
        if self.noise_enabled:
            pairs["noise.kind"] = self.noise_kind
            pairs["noise.time_extended"] = str(self.noise_time_extended).lower()
            pairs["noise.gamma"] = repr(self.noise_gamma)
            pairs["noise.nt"] = self.noise_nt
            pairs["noise.basis"] = self.effective_noise_basis
        if self.snapshot_every is not None:
            pairs["time.snapshot_every"] = self.snapshot_every
        if self.init_center is not None:
            pairs["init.center"] = repr(self.init_center)
        if self.init_center_y is not None:
            pairs["init.center_y"] = repr(self.init_center_y)
        if self.init_file is not None:
            pairs["init.file"] = self.init_file
        if self.oracle_panel:
            pairs["oracle.panel"] = ",".join(self.oracle_panel)
        if self.oracle_dt is not None:
            pairs["oracle.dt"] = repr(self.oracle_dt)
        return "\n".join(f"{k} = {pairs[k]}" for k in sorted(pairs)) + "\n"

    @property
    def effective_noise_basis(self) -> int:
        return self.noise_basis if self.noise_basis is not None else self.chaos_n


def build_config(raw: dict[str, str], base_dir: str = ".") -> ExperimentConfig:
    """Convert raw pairs into a validated ExperimentConfig."""
    unknown = sorted(set(raw) - set(_KNOWN_KEYS))
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")
    if "equation" not in raw:
        raise ConfigError("equation: required key is missing")
    vals = {key: _convert(key, value) for key, value in raw.items()}

    eq = vals["equation"]
    if eq not in EQUATIONS:
        raise ConfigError(f"equation: unknown value {eq!r}; expected one of {', '.join(EQUATIONS)}")

    cfg = ExperimentConfig(equation=eq)
    mapping = {
        "seed": "seed", "out": "out", "threads": "threads",
        "grid.nx": "nx", "grid.ny": "ny", "grid.length": "length",
        "grid.length_y": "length_y",
        "chaos.k": "chaos_k", "chaos.n": "chaos_n",
        "noise.enabled": "noise_enabled", "noise.kind": "noise_kind",
        "noise.time_extended": "noise_time_extended",
        "noise.gamma": "noise_gamma", "noise.nt": "noise_nt", "noise.basis": "noise_basis",
        "time.t": "t_final", "time.dt": "dt", "time.snapshot_every": "snapshot_every",
        "init.profile": "init_profile", "init.amplitude": "init_amplitude",
        "init.width": "init_width", "init.center": "init_center",
        "init.center_y": "init_center_y", "init.k0": "init_k0",
        "init.wavenumber": "init_wavenumber", "init.speed": "init_speed",
        "init.s": "init_s", "init.gamma": "init_gamma", "init.file": "init_file",
        "eq.sigma": "sigma", "eq.p": "p", "eq.sup_bound": "sup_bound",
        "oracle.dt": "oracle_dt", "mc.samples": "mc_samples",
    }
    for key, attr in mapping.items():
        if key in vals:
            setattr(cfg, attr, vals[key])
    if "oracle.panel" in vals:
        panel = tuple(p.strip() for p in vals["oracle.panel"].split(",") if p.strip())
        for p in panel:
            if p not in ORACLE_PANELS and p != "none":
                raise ConfigError(
                    f"oracle.panel: unknown entry {p!r}; expected {', '.join(ORACLE_PANELS)}"
                )
        cfg.oracle_panel = tuple(p for p in panel if p != "none")

    _validate(cfg, base_dir)
    return cfg


def _require(cond: bool, key: str, message: str):
    if not cond:
        raise ConfigError(f"{key}: {message}")


def _validate(cfg: ExperimentConfig, base_dir: str):
    _require(cfg.nx >= 2 and (cfg.nx & (cfg.nx - 1)) == 0, "grid.nx",
             f"must be a power of two >= 2, got {cfg.nx}")
    _require(cfg.length > 0, "grid.length", f"must be positive, got {cfg.length}")
    if cfg.ny is not None:
        _require(cfg.equation in TWO_D_EQUATIONS, "grid.ny",
                 f"{cfg.equation} supports 1-D grids only")
        _require(cfg.ny >= 2 and (cfg.ny & (cfg.ny - 1)) == 0, "grid.ny",
                 f"must be a power of two >= 2, got {cfg.ny}")
        if cfg.length_y is None:
            cfg.length_y = cfg.length
        _require(cfg.length_y > 0, "grid.length_y", f"must be positive, got {cfg.length_y}")
    _require(cfg.chaos_k >= 0, "chaos.k", f"must be >= 0, got {cfg.chaos_k}")
    _require(cfg.chaos_n >= 1, "chaos.n", f"must be >= 1, got {cfg.chaos_n}")
    _require(cfg.t_final > 0, "time.t", f"must be positive, got {cfg.t_final}")
    _require(cfg.dt > 0, "time.dt", f"must be positive, got {cfg.dt}")
    n_steps = round(cfg.t_final / cfg.dt)
    _require(
        n_steps >= 1 and abs(n_steps * cfg.dt - cfg.t_final) <= 1e-9 * max(1.0, cfg.t_final),
        "time.dt", f"time.t={cfg.t_final} must be an integer multiple of dt={cfg.dt}",
    )
    if cfg.snapshot_every is not None:
        _require(cfg.snapshot_every >= 1, "time.snapshot_every",
                 f"must be >= 1, got {cfg.snapshot_every}")
    _require(cfg.init_profile in PROFILES, "init.profile",
             f"unknown value {cfg.init_profile!r}; expected one of {', '.join(PROFILES)}")
    if cfg.init_profile == "file":
        _require(cfg.init_file is not None, "init.file", "required when init.profile = file")
        path = os.path.join(base_dir, cfg.init_file)
        _require(os.path.exists(path), "init.file", f"referenced file {path!r} does not exist")
        cfg.init_file = path
    _require(cfg.sigma > 0, "eq.sigma", f"must be positive, got {cfg.sigma}")
    _require(cfg.p in (2, 3), "eq.p", f"must be 2 or 3, got {cfg.p}")
    _require(cfg.sup_bound > 0, "eq.sup_bound", f"must be positive, got {cfg.sup_bound}")
    _require(cfg.mc_samples >= 0, "mc.samples", f"must be >= 0, got {cfg.mc_samples}")
    if cfg.noise_enabled and cfg.equation in TIME_NOISE_EQUATIONS:
        _require(cfg.noise_gamma >= 0, "noise.gamma", f"must be >= 0, got {cfg.noise_gamma}")
        _require(cfg.noise_nt >= 2 and (cfg.noise_nt & (cfg.noise_nt - 1)) == 0, "noise.nt",
                 f"must be a power of two >= 2, got {cfg.noise_nt}")
        _require(cfg.effective_noise_basis <= cfg.chaos_n, "noise.basis",
                 f"{cfg.effective_noise_basis} exceeds chaos.n={cfg.chaos_n}")
    if cfg.equation in ("kdv", "bo", "transport"):
        _require(cfg.ny is None, "grid.ny", f"{cfg.equation} is 1-D only")
    if cfg.oracle_dt is not None:
        _require(cfg.oracle_dt > 0, "oracle.dt", f"must be positive, got {cfg.oracle_dt}")

    n_coeff = math.comb(cfg.chaos_n + cfg.chaos_k, cfg.chaos_k)
    nodes = cfg.nx * (cfg.ny or 1)
    if n_coeff * nodes > 1_000_000:
        mem = n_coeff * nodes * 16 / 1e6
        cfg.warnings.append(
            f"chaos.k/chaos.n: {n_coeff} coefficients x {nodes} nodes "
            f"= {n_coeff * nodes} values (~{mem:.0f} MB per complex snapshot)"
        )


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        text = fh.read()
    return build_config(parse_config_text(text), base_dir=os.path.dirname(path) or ".")
