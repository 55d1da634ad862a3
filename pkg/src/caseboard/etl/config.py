"""ETL run configuration.

Config files are plain text, one `key = value` per line, keys exactly the
EtlConfig fields. Blank lines and # comments are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from caseboard.errors import InvalidSettings

_KEYS = ("coalesce_window_seconds", "batch_size", "journal", "registry", "warehouse")


@dataclass(frozen=True)
class EtlConfig:
    journal: str
    warehouse: str
    registry: str | None = None
    coalesce_window_seconds: int = 0
    batch_size: int = 1000

    def validate(self) -> None:
        if not self.journal:
            raise InvalidSettings("journal path is required")
        if not self.warehouse:
            raise InvalidSettings("warehouse path is required")
        if self.batch_size < 1:
            raise InvalidSettings(f"batch_size must be >= 1, got {self.batch_size}")
        if self.coalesce_window_seconds < 0:
            raise InvalidSettings(
                f"coalesce_window_seconds must be >= 0, got {self.coalesce_window_seconds}"
            )


def parse_config_text(text: str) -> EtlConfig:
    values: dict[str, str] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidSettings(f"config line {line_number}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KEYS:
            raise InvalidSettings(f"config line {line_number}: unknown key {key!r}")
        values[key] = value.strip()

    config = EtlConfig(
        journal=values.get("journal", ""),
        warehouse=values.get("warehouse", ""),
        registry=values.get("registry") or None,
        coalesce_window_seconds=int(values.get("coalesce_window_seconds", "0")),
        batch_size=int(values.get("batch_size", "1000")),
    )
    config.validate()
    return config


def load_config(path: str | Path) -> EtlConfig:
    path = Path(path)
    if not path.exists():
        raise InvalidSettings(f"no config file at {path}")
    return parse_config_text(path.read_text(encoding="utf-8"))


def render_config(config: EtlConfig) -> str:
    lines = [
        f"journal = {config.journal}",
        f"warehouse = {config.warehouse}",
    ]
    if config.registry:
        lines.append(f"registry = {config.registry}")
    lines.append(f"coalesce_window_seconds = {config.coalesce_window_seconds}")
    lines.append(f"batch_size = {config.batch_size}")
    return "\n".join(lines) + "\n"
