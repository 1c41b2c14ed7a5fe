"""Run configuration: a flat key-value file plus flag overrides.

The file format is one ``key = value`` pair per line; blank lines and
``#`` comments are ignored. Keys are exactly the RunConfig fields and
nothing else, so a dumped config (or a run manifest, which is a config
with comment headers) parses back to an identical RunConfig.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Any

from .errors import ParameterError

VARIANTS = ("subgraph", "induced")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs to run reproducibly."""

    node_file: str | None = None
    edge_file: str | None = None
    event_file: str | None = None
    country_tag: str = ""
    voltage_floor_kv: int = 220
    year_start: int | None = None
    year_end: int | None = None
    gamma: float = 1.0
    seed: int = 42
    chordless_only: bool = True
    variant: str = "subgraph"
    window: int = 5
    threshold: float = 0.2
    out_dir: str = "out"


CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))


def _parse_value(key: str, raw: str, source: str, line: int) -> Any:
    kind = RunConfig.__dataclass_fields__[key].type
    if raw == "" and "None" in kind:
        return None
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
        if kind.startswith("bool"):
            if raw not in ("true", "false"):
                raise ValueError
            return raw == "true"
    except ValueError:
        raise ParameterError(f"{source}:{line}: bad value for {key}: {raw!r}") from None
    if key == "variant" and raw not in VARIANTS:
        raise ParameterError(
            f"{source}:{line}: variant must be one of {', '.join(VARIANTS)}, got {raw!r}"
        )
    return raw


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    """Parse config text; unknown or repeated keys are errors."""
    seen: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParameterError(f"{source}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in CONFIG_KEYS:
            raise ParameterError(f"{source}:{lineno}: unknown config key {key!r}")
        if key in seen:
            raise ParameterError(f"{source}:{lineno}: config key {key!r} given twice")
        seen[key] = _parse_value(key, raw, source, lineno)
    return RunConfig(**seen)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=path)


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config: RunConfig, header_lines: tuple[str, ...] = ()) -> str:
    """Render a config (optionally with comment headers) so that parsing
    the result returns an equal RunConfig."""
    lines = [f"# {line}" for line in header_lines]
    lines.extend(f"{key} = {_format_value(getattr(config, key))}" for key in CONFIG_KEYS)
    return "\n".join(lines) + "\n"


def apply_overrides(config: RunConfig, **overrides: Any) -> RunConfig:
    """Non-None overrides replace config values; unknown names are bugs."""
    changes = {key: value for key, value in overrides.items() if value is not None}
    for key in changes:
        if key not in CONFIG_KEYS:
            raise ParameterError(f"unknown config field {key!r}")
    if "variant" in changes and changes["variant"] not in VARIANTS:
        raise ParameterError(f"variant must be one of {', '.join(VARIANTS)}")
    return replace(config, **changes)
