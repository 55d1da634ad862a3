from caseboard.etl.config import EtlConfig, load_config, parse_config_text, render_config
from caseboard.etl.pipeline import (
    CaseContext,
    EtlFailure,
    EtlStats,
    coalesce,
    extract,
    rebuild,
    registry_record,
    run,
    status,
    transform,
)

__all__ = [
    "CaseContext",
    "EtlConfig",
    "EtlFailure",
    "EtlStats",
    "coalesce",
    "extract",
    "load_config",
    "parse_config_text",
    "rebuild",
    "registry_record",
    "render_config",
    "run",
    "status",
    "transform",
]
