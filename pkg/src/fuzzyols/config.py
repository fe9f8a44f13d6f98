"""Pipeline parameters and their key-value text form."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

MODES = ("modified", "original")


@dataclass(frozen=True)
class PipelineConfig:
    """Every learning parameter, with the defaults used throughout.

    ``max_rules`` and ``c`` are None for "no limit" and "no vocabulary
    reduction". ``literal_conclusions`` switches the initial conclusions of
    generated systems from the firing-weighted mean to the sum divided by N.
    """

    mode: str = "modified"
    alpha: float = 0.1
    epsilon: float = 0.01
    max_rules: int | None = None
    s: float = 0.2
    n_max: int = 7
    iter_max: int = 20
    thres: float = 0.9
    c: int | None = None
    conjunction: str = "min"
    seed: int = 42
    norm_tol: float = 1e-10
    literal_conclusions: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.conjunction not in ("min", "prod"):
            raise ValueError(f"conjunction must be min or prod, got {self.conjunction!r}")
        if not 0 <= self.alpha < 1:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.max_rules is not None and self.max_rules < 1:
            raise ValueError("max_rules must be >= 1")
        if self.c is not None and self.c < 1:
            raise ValueError("c must be >= 1")
        if self.n_max < 1 or self.iter_max < 1:
            raise ValueError("n_max and iter_max must be >= 1")
        if self.s <= 0:
            raise ValueError("s must be positive")

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            lines.append(f"{key} = {'none' if value is None else value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_mapping(cls, mapping) -> "PipelineConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            key = key.strip().replace("-", "_")
            if key not in fields:
                raise ValueError(f"unknown configuration key {key!r}")
            kwargs[key] = _coerce(key, raw, fields[key].default)
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        """Parse ``key = value`` lines; blank lines, ``#`` comments and ``[section]`` headers are skipped."""
        mapping = {}
        for n, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line or (line.startswith("[") and line.endswith("]")):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"line {n}: expected 'key = value'")
            mapping[key.strip()] = value.strip()
        return cls.from_mapping(mapping)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        return cls.from_text(Path(path).read_text())


def _coerce(key, raw, default):
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    if key in ("max_rules", "c"):
        return None if text.lower() in ("none", "", "0", "unlimited") else int(text)
    if isinstance(default, bool):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{key}: expected a boolean, got {raw!r}")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text
