from caseboard.registry.client import HttpRegistry, LocalRegistry, Registry, open_registry
from caseboard.registry.events import RegistryEvent, registry_event_id, registry_to_events
from caseboard.registry.types import (
    AnnualFigures,
    BANKRUPTCY_CATEGORY,
    CompanyRecord,
    FINANCIAL_CATEGORIES,
    REGISTERED_CATEGORY,
)

__all__ = [
    "AnnualFigures",
    "BANKRUPTCY_CATEGORY",
    "CompanyRecord",
    "FINANCIAL_CATEGORIES",
    "HttpRegistry",
    "LocalRegistry",
    "REGISTERED_CATEGORY",
    "Registry",
    "RegistryEvent",
    "open_registry",
    "registry_event_id",
    "registry_to_events",
]
