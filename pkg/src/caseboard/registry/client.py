"""Clients for the company registry.

LocalRegistry reads a fixtures file and answers in-process; HttpRegistry
talks to a registry HTTP service with bounded retries. Both expose the same
two calls so the rest of the system doesn't care which one it holds.
"""

from __future__ import annotations

import json
import logging
import time
from pathlib import Path
from typing import Protocol

import httpx

from caseboard.errors import NotFound, RegistryUnavailable
from caseboard.registry.types import AnnualFigures, CompanyRecord, company_from_dict

log = logging.getLogger(__name__)


class Registry(Protocol):
    def fetch_company(self, organization_number: str) -> CompanyRecord: ...

    def fetch_annual_figures(self, organization_number: str) -> tuple[AnnualFigures, ...]: ...


class LocalRegistry:
    def __init__(self, fixtures_path: str | Path):
        with open(fixtures_path, encoding="utf-8") as handle:
            doc = json.load(handle)
        self._companies = {
            c["organization_number"]: company_from_dict(c) for c in doc.get("companies", ())
        }

    def fetch_company(self, organization_number: str) -> CompanyRecord:
        try:
            return self._companies[organization_number]
        except KeyError:
            raise NotFound(f"no company {organization_number} in the registry") from None

    def fetch_annual_figures(self, organization_number: str) -> tuple[AnnualFigures, ...]:
        return self.fetch_company(organization_number).annual_figures

    def organization_numbers(self) -> list[str]:
        return sorted(self._companies)


class HttpRegistry:
    """Registry over HTTP with retry-then-fail semantics.

    Transient transport errors and 5xx responses are retried `attempts`
    times with linear backoff; a 404 is NotFound immediately.
    """

    def __init__(
        self,
        base_url: str,
        *,
        attempts: int = 3,
        backoff_seconds: float = 0.2,
        timeout: float = 10.0,
        client: httpx.Client | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.attempts = attempts
        self.backoff_seconds = backoff_seconds
        self._client = client or httpx.Client(timeout=timeout)

    def close(self) -> None:
        self._client.close()

    def _get(self, path: str) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.attempts):
            try:
                response = self._client.get(f"{self.base_url}{path}")
            except httpx.TransportError as exc:
                last_error = exc
            else:
                if response.status_code == 404:
                    raise NotFound(f"registry has no resource at {path}")
                if response.status_code < 500:
                    response.raise_for_status()
                    return response.json()
                last_error = RegistryUnavailable(f"registry returned {response.status_code}")
            if attempt + 1 < self.attempts:
                time.sleep(self.backoff_seconds * (attempt + 1))
        raise RegistryUnavailable(f"registry unreachable after {self.attempts} attempts") from last_error

    def fetch_company(self, organization_number: str) -> CompanyRecord:
        return company_from_dict(self._get(f"/companies/{organization_number}"))

    def fetch_annual_figures(self, organization_number: str) -> tuple[AnnualFigures, ...]:
        return self.fetch_company(organization_number).annual_figures


def open_registry(location: str) -> Registry:
    """`http(s)://...` gets an HTTP client; anything else is a fixtures path."""
    if location.startswith(("http://", "https://")):
        return HttpRegistry(location)
    return LocalRegistry(location)
