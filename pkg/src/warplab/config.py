"""Run configuration for the batch front-end.

A RunConfig bundles everything one pipeline run depends on: which command to
execute, the model parameters (dimension, curvature profile, grid range,
tolerance), the verifier parameters (exponent lists, corpus seed and size,
radius sweeps), and the output destination.

Fields left at None fall back to per-command defaults (tables below) chosen
so every command runs a meaningful scenario out of the box; `resolved()`
fills them in and is what the runners consume.  Precedence when assembling a
config is command-line flags > config file > defaults.

On disk a config is a single human-editable JSON document carrying the
schema tag below; `to_dict`/`from_dict` round-trip losslessly.
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from . import curvature
from .errors import ConfigurationError

__all__ = [
    "CONFIG_SCHEMA",
    "COMMANDS",
    "RunConfig",
    "build_profile",
    "config_hash",
    "load_config",
]

CONFIG_SCHEMA = "warplab-config/1"

COMMANDS = (
    "model",
    "green",
    "hardy",
    "hardy2",
    "embed",
    "cz2",
    "cutoffs",
    "density",
    "ppp",
    "liyau",
    "stochastic",
    "all",
)

PROFILES = ("powerlaw", "flat")

# Grid ranges sized to each command's needs: the hessian-cutoff sweep must
# reach twice its largest radius, the stochastic classifier needs the grid to
# pass 100, and the radius-sweep probes double up to 64.
DEFAULT_T_MAX = {
    "model": 30.0,
    "green": 60.0,
    "hardy": 60.0,
    "hardy2": 60.0,
    "embed": 60.0,
    "cz2": 60.0,
    "cutoffs": 2200.0,
    "density": 132.0,
    "ppp": 132.0,
    "liyau": 132.0,
    "stochastic": 200.0,
}

DEFAULT_RADII = {
    "cutoffs": (16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0),
    "density": (8.0, 16.0, 32.0, 64.0),
    "ppp": (8.0, 16.0, 32.0, 64.0),
    "liyau": (8.0, 16.0, 32.0, 64.0),
}

# liyau compares the eigenfunction gradient against the scale lambda = a t,
# which matches the curvature kappa = t^2; the other commands default to the
# generic slow-growth profile kappa = t.
DEFAULT_ALPHA = {"liyau": 2.0}
FALLBACK_ALPHA = 1.0

# cutoffs certifies against curvature-matched models, one per exponent; the
# Hardy-type commands default to the unweighted inequality.
DEFAULT_BETA = {"cutoffs": (0.0, 2.0, 4.0)}
FALLBACK_BETA = (0.0,)


def _float_tuple(value, field: str) -> tuple:
    try:
        out = tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{field} must be a sequence of numbers") from exc
    if not out:
        raise ConfigurationError(f"{field} must not be empty")
    return out


@dataclass
class RunConfig:
    command: str
    n: int = 3
    profile: str = "powerlaw"
    A: float = 1.0
    alpha: Optional[float] = None
    t_max: Optional[float] = None
    tol: float = 1e-10
    p_list: tuple = (2.0,)
    beta_list: Optional[tuple] = None
    epsilon_list: tuple = (0.5, 0.25, 0.125, 0.0625)
    seed: int = 42
    count: int = 50
    radii: Optional[tuple] = None
    weight_power: Optional[float] = None
    inner_radius: float = 1.0
    gamma: float = 2.0
    lam_a: float = 1.0
    lam_k: int = 0
    out: str = "out"
    plot: bool = False

    def __post_init__(self):
        self.command = str(self.command)
        self.n = int(self.n)
        self.profile = str(self.profile)
        self.A = float(self.A)
        self.alpha = None if self.alpha is None else float(self.alpha)
        self.t_max = None if self.t_max is None else float(self.t_max)
        self.tol = float(self.tol)
        self.p_list = _float_tuple(self.p_list, "p_list")
        self.beta_list = (
            None if self.beta_list is None else _float_tuple(self.beta_list, "beta_list")
        )
        self.epsilon_list = _float_tuple(self.epsilon_list, "epsilon_list")
        self.seed = int(self.seed)
        self.count = int(self.count)
        self.radii = None if self.radii is None else _float_tuple(self.radii, "radii")
        self.weight_power = (
            None if self.weight_power is None else float(self.weight_power)
        )
        self.inner_radius = float(self.inner_radius)
        self.gamma = float(self.gamma)
        self.lam_a = float(self.lam_a)
        self.lam_k = int(self.lam_k)
        self.out = str(self.out)
        self.plot = bool(self.plot)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(
                f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}"
            )
        if self.profile not in PROFILES:
            raise ConfigurationError(
                f"unknown profile {self.profile!r}; expected one of {', '.join(PROFILES)}"
            )
        if self.n < 2:
            raise ConfigurationError(f"dimension n must be >= 2, got {self.n}")
        if not self.A > 0.0:
            raise ConfigurationError(f"curvature amplitude A must be positive, got {self.A!r}")
        if self.alpha is not None and not self.alpha >= 0.0:
            raise ConfigurationError(f"curvature exponent alpha must be >= 0, got {self.alpha!r}")
        if self.t_max is not None and not self.t_max > 1.0:
            raise ConfigurationError(f"t_max must exceed 1, got {self.t_max!r}")
        if not 1e-13 <= self.tol <= 1e-4:
            raise ConfigurationError(f"tol must lie in [1e-13, 1e-4], got {self.tol!r}")
        if self.count < 1:
            raise ConfigurationError(f"corpus size must be >= 1, got {self.count}")
        if self.radii is not None:
            if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
                raise ConfigurationError("radii must increase strictly")
            if not self.radii[0] > 0.0:
                raise ConfigurationError("radii must be positive")
        if not self.inner_radius > 0.0:
            raise ConfigurationError(
                f"inner_radius must be positive, got {self.inner_radius!r}"
            )
        if not self.gamma > 1.0:
            raise ConfigurationError(f"annulus ratio gamma must exceed 1, got {self.gamma!r}")
        if not self.lam_a > 0.0:
            raise ConfigurationError(f"lam_a must be positive, got {self.lam_a!r}")
        if self.lam_k < 0:
            raise ConfigurationError(f"lam_k must be >= 0, got {self.lam_k}")

    def resolved(self, command: Optional[str] = None) -> "RunConfig":
        """Copy with per-command defaults substituted for unset fields."""
        cmd = self.command if command is None else command
        if cmd == "all":
            raise ConfigurationError("'all' resolves per sub-command, not directly")
        out = dataclasses.replace(self, command=cmd)
        if out.t_max is None:
            out.t_max = DEFAULT_T_MAX[cmd]
        if out.alpha is None:
            out.alpha = DEFAULT_ALPHA.get(cmd, FALLBACK_ALPHA)
        if out.radii is None:
            out.radii = DEFAULT_RADII.get(cmd)
        if out.beta_list is None:
            out.beta_list = DEFAULT_BETA.get(cmd, FALLBACK_BETA)
        return out

    def to_dict(self) -> dict:
        data = {"schema": CONFIG_SCHEMA}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            data[f.name] = list(v) if isinstance(v, tuple) else v
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config document must be a JSON object")
        data = dict(data)
        schema = data.pop("schema", None)
        if schema != CONFIG_SCHEMA:
            raise ConfigurationError(
                f"unsupported config schema {schema!r}; expected {CONFIG_SCHEMA!r}"
            )
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown config fields: {', '.join(unknown)}")
        if "command" not in data:
            raise ConfigurationError("config must name a command")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed config: {exc}") from exc

    def canonical_bytes(self) -> bytes:
        return json.dumps(
            self.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False
        ).encode("ascii")


def config_hash(cfg: RunConfig) -> str:
    """sha256 of the canonical serialized form; pinned in the manifest."""
    return hashlib.sha256(cfg.canonical_bytes()).hexdigest()


def load_config(path: str) -> dict:
    """Read a config document; raise ConfigurationError on malformed input."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return data


def build_profile(cfg: RunConfig, alpha: Optional[float] = None):
    """Curvature profile for a resolved config (alpha override for sweeps)."""
    if cfg.profile == "flat":
        return curvature.Flat()
    a = cfg.alpha if alpha is None else alpha
    if a is None:
        raise ConfigurationError("powerlaw profile needs a resolved alpha")
    return curvature.PowerLaw(A=cfg.A, alpha=float(a))
