"""Flat key=value run configuration for the batch front-end.

The format is deliberately minimal: one ``key = value`` pair per line,
``#`` starts a comment, keys are case-insensitive, list-valued keys take
comma-separated numbers.  Unknown keys are rejected by name and malformed
lines are reported with their line number.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

__all__ = ["ConfigError", "RunConfig", "parse_config", "render_config"]

COMMANDS = ("solve", "validate", "converge", "sweep", "eringen")

BC_ALIASES = {
    "clamped": "clamped-clamped",
    "clamped-clamped": "clamped-clamped",
    "cc": "clamped-clamped",
    "ss": "simply-supported",
    "simply-supported": "simply-supported",
    "cantilever": "cantilever",
    "cf": "cantilever",
}

LOAD_KINDS = ("udl", "tip", "axial-udl", "mms-v1", "mms-v2")

MODES = {
    "fractional": "fractional",
    "eringen": "eringen-exponential",
    "eringen-exponential": "eringen-exponential",
    "local": "local",
}

ELEMENTS = {
    "two": "two-noded-C1",
    "two-noded": "two-noded-C1",
    "two-noded-C1": "two-noded-C1",
    "three": "three-noded-C1",
    "three-noded": "three-noded-C1",
    "three-noded-C1": "three-noded-C1",
}


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    command: str = "solve"
    bc: str = "clamped-clamped"
    load: str = "udl"
    q0: float = 1.0
    p: float = 1.0
    f0: float = 1.0
    case: str = "v1"
    alpha: tuple[float, ...] = (0.8,)
    lf: tuple[float, ...] = (0.1,)
    L: float = 1.0
    h: float = 0.01
    b: float = 1.0
    E: float = 30.0e9
    ne: int = 0  # 0 means derived from ninf and lf
    ninf: int = 10
    ngp: int = 4
    element: str = "two-noded-C1"
    mode: str = "fractional"
    partial_horizon: str = "exact"
    btilde: str = "analytic"
    threads: int = 1
    out: str = "."


_REQUIRED = {
    "solve": ("bc", "load", "alpha", "lf"),
    "validate": ("case",),
    "converge": ("lf",),
    "sweep": ("bc", "load", "alpha", "lf"),
    "eringen": (),
}

_FLOAT_KEYS = {"q0", "p", "f0", "l", "h", "b", "e"}
_INT_KEYS = {"ne", "ninf", "ngp", "threads"}
_LIST_KEYS = {"alpha", "lf"}


def _parse_float(key: str, raw: str, lineno: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: key {key!r} expects a number, got {raw!r}") from None


def _parse_int(key: str, raw: str, lineno: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: key {key!r} expects an integer, got {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration, applying defaults."""
    cfg = RunConfig()
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if not raw:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        seen.add(key)
        if key == "command":
            if raw not in COMMANDS:
                raise ConfigError(f"line {lineno}: unknown command {raw!r}; expected one of {COMMANDS}")
            cfg.command = raw
        elif key == "bc":
            if raw.lower() not in BC_ALIASES:
                raise ConfigError(f"line {lineno}: unknown bc {raw!r}")
            cfg.bc = BC_ALIASES[raw.lower()]
        elif key == "load":
            if raw.lower() not in LOAD_KINDS:
                raise ConfigError(f"line {lineno}: unknown load {raw!r}; expected one of {LOAD_KINDS}")
            cfg.load = raw.lower()
        elif key == "case":
            if raw.lower() not in ("v1", "v2"):
                raise ConfigError(f"line {lineno}: case must be v1 or v2, got {raw!r}")
            cfg.case = raw.lower()
        elif key in _LIST_KEYS:
            vals = tuple(_parse_float(key, v.strip(), lineno) for v in raw.split(","))
            setattr(cfg, key, vals)
        elif key in _FLOAT_KEYS:
            attr = "E" if key == "e" else ("L" if key == "l" else key)
            setattr(cfg, attr, _parse_float(key, raw, lineno))
        elif key in _INT_KEYS:
            setattr(cfg, key, _parse_int(key, raw, lineno))
        elif key == "element":
            if raw not in ELEMENTS:
                raise ConfigError(f"line {lineno}: unknown element {raw!r}")
            cfg.element = ELEMENTS[raw]
        elif key == "mode":
            if raw.lower() not in MODES:
                raise ConfigError(f"line {lineno}: unknown mode {raw!r}")
            cfg.mode = MODES[raw.lower()]
        elif key == "partial_horizon":
            if raw not in ("exact", "rounded"):
                raise ConfigError(f"line {lineno}: partial_horizon must be exact or rounded")
            cfg.partial_horizon = raw
        elif key == "btilde":
            if raw not in ("analytic", "gauss"):
                raise ConfigError(f"line {lineno}: btilde must be analytic or gauss")
            cfg.btilde = raw
        elif key == "out":
            cfg.out = raw
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    _validate(cfg, seen)
    return cfg


def _validate(cfg: RunConfig, seen: set[str]) -> None:
    for key in _REQUIRED[cfg.command]:
        if key not in seen:
            raise ConfigError(f"command {cfg.command!r} requires key {key!r}")
    for name in ("L", "h", "b", "E"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    for a in cfg.alpha:
        if not (0.0 < a <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {a}")
    for lf in cfg.lf:
        if not (0.0 < lf <= cfg.L):
            raise ConfigError(f"lf must lie in (0, L], got {lf}")
    if cfg.ne < 0:
        raise ConfigError("ne must be non-negative")
    if cfg.ninf < 1:
        raise ConfigError("ninf must be >= 1")
    if not (2 <= cfg.ngp <= 16):
        raise ConfigError("ngp must be in [2, 16]")
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")


def render_config(cfg: RunConfig) -> str:
    """Serialize a configuration so that parse(render(cfg)) == cfg."""
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if isinstance(val, tuple):
            rendered = ",".join(repr(v) for v in val)
        else:
            rendered = repr(val) if isinstance(val, float) else str(val)
        lines.append(f"{f.name.lower()}={rendered}")
    return "\n".join(lines) + "\n"
