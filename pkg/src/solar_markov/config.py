"""Run configuration: a plain-text ``key = value`` file with dotted keys.

Example::

    # summer run
    data = july.csv
    out = runs/july
    threshold.lr = 200
    plan.preset = summer-paper
    fit.on = pooled

Blank lines and ``#`` comments are ignored. Command-line flags override
file values.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .discretize import SolarState, ThresholdConfig
from .errors import ConfigError
from .generator import CARRY_MODES, PLAN_PRESETS, SegmentationPlan, plan_preset

FIT_MODES = ("repday", "pooled")


def _bool(text):
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _boundaries(text):
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    if len(parts) < 2:
        raise ValueError("plan.boundaries needs at least two comma-separated times")
    return parts


# dotted key -> (RunConfig field, parser, formatter)
_KEYS = {
    "data": ("data", str, str),
    "out": ("out", str, str),
    "model": ("model", str, str),
    "threshold.lr": ("threshold_lr", float, repr),
    "threshold.mr": ("threshold_mr", float, repr),
    "threshold.max": ("threshold_max", float, repr),
    "plan.preset": ("plan_preset", str, str),
    "plan.boundaries": ("plan_boundaries", _boundaries, ",".join),
    "plan.slot_minutes": ("slot_minutes", int, str),
    "fit.on": ("fit_on", str, str),
    "fit.smoothing": ("smoothing", float, repr),
    "generate.carry": ("carry", str, str),
    "generate.strict_alg1": ("strict_alg1", _bool, lambda b: "true" if b else "false"),
    "generate.initial": ("initial", str, str),
    "test.significance": ("significance", float, repr),
    "test.stationarity_threshold": ("stationarity_threshold", float, repr),
    "sample.seed": ("seed", int, str),
}


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    out: str = "out"
    model: str | None = None
    threshold_lr: float = 200.0
    threshold_mr: float = 450.0
    threshold_max: float = 500.0
    plan_preset: str | None = "summer-paper"
    plan_boundaries: tuple | None = None
    slot_minutes: int = 5
    fit_on: str = "repday"
    smoothing: float = 0.0
    carry: str = "distribution"
    strict_alg1: bool = False
    initial: str | None = None
    significance: float = 0.05
    stationarity_threshold: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if (self.plan_preset is None) == (self.plan_boundaries is None):
            raise ConfigError("give exactly one of plan.preset and plan.boundaries")
        if self.plan_preset is not None and self.plan_preset not in PLAN_PRESETS:
            raise ConfigError(f"unknown plan preset {self.plan_preset!r}; choose from {sorted(PLAN_PRESETS)}")
        if self.fit_on not in FIT_MODES:
            raise ConfigError(f"fit.on must be one of {FIT_MODES}")
        if self.carry not in CARRY_MODES:
            raise ConfigError(f"generate.carry must be one of {CARRY_MODES}")
        if not 0 < self.significance < 1:
            raise ConfigError("test.significance must lie in (0, 1)")
        if self.smoothing < 0 or self.stationarity_threshold < 0:
            raise ConfigError("fit.smoothing and test.stationarity_threshold must be non-negative")
        if self.initial is not None:
            try:
                SolarState.parse(self.initial)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        try:
            self.thresholds
            self.plan
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def thresholds(self):
        return ThresholdConfig(self.threshold_lr, self.threshold_mr, self.threshold_max)

    @property
    def plan(self):
        if self.plan_preset is not None:
            return plan_preset(self.plan_preset, self.slot_minutes)
        return SegmentationPlan.from_boundaries(self.plan_boundaries, self.slot_minutes)

    @property
    def initial_state(self):
        return None if self.initial is None else SolarState.parse(self.initial)

    @property
    def model_dir(self):
        return self.model if self.model is not None else self.out


def parse_config_text(text, source="<config>"):
    """Return ``{dotted key: raw string}``; later duplicates are an error."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def apply_overrides(cfg, raw):
    """Apply ``{dotted key: raw string}`` on top of ``cfg``."""
    if "plan.preset" in raw and "plan.boundaries" in raw:
        raise ConfigError("give exactly one of plan.preset and plan.boundaries")
    changes = {}
    for key, value in raw.items():
        name, parse, _ = _KEYS[key]
        try:
            changes[name] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    if "plan.boundaries" in raw:
        changes["plan_preset"] = None
    elif "plan.preset" in raw:
        changes["plan_boundaries"] = None
    return replace(cfg, **changes)


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return apply_overrides(base or RunConfig(), parse_config_text(text, str(path)))


def dump_config(cfg):
    """Render ``cfg`` so that parsing the text reproduces it exactly."""
    by_field = {name: (key, fmt) for key, (name, _, fmt) in _KEYS.items()}
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        key, fmt = by_field[f.name]
        lines.append(f"{key} = {fmt(value)}")
    return "\n".join(lines) + "\n"
