"""Extract, coalesce, transform, load.

The pipeline pulls journal events forward of the stored watermark in
batches, optionally collapses rapid same-author edits, denormalizes case and
company context onto each event, and upserts into the warehouse. Each batch
commits together with the new watermark, so a run killed at any point
resumes without duplicating or dropping records. Registry data for every
consenting linked company is merged once per run, stamped at year-end.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable

from filelock import FileLock, Timeout

from caseboard.domain.taxonomy import ActionType
from caseboard.errors import (
    CaseboardError,
    NotFound,
    OrphanEvent,
    RegistryUnavailable,
    SinkUnavailable,
    SourceUnavailable,
)
from caseboard.etl.config import EtlConfig
from caseboard.journal import EventJournal, JournalEvent
from caseboard.platform.state import load_cases
from caseboard.registry.client import Registry, open_registry
from caseboard.registry.events import RegistryEvent, registry_to_events
from caseboard.registry.types import CompanyRecord
from caseboard.timeutil import format_timestamp, utc_now
from caseboard.warehouse.records import JOURNAL, REGISTRY, WarehouseRecord, validate_record
from caseboard.warehouse.store import WarehouseStore

log = logging.getLogger(__name__)

LOCK_TIMEOUT_SECONDS = 60.0


@dataclass
class EtlStats:
    extracted: int = 0
    coalesced_away: int = 0
    loaded: int = 0
    skipped_consent: int = 0
    registry_events: int = 0
    orphaned: int = 0
    batches: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


class EtlFailure(CaseboardError):
    """A stage failed mid-run; the watermark stands at the last good batch."""

    code = "etl_failure"

    def __init__(self, stage: str, stats: EtlStats, cause: Exception):
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage
        self.stats = stats


@dataclass
class CaseContext:
    """The slice of case state the transform snapshots onto records."""

    case_id: str
    case_title: str
    consent: bool = True
    organization_number: str | None = None
    company_name: str | None = None
    country: str | None = None
    postcode: str | None = None
    nace_code: str | None = None
    client_id: str | None = None
    relating_to_whole_company: bool = True
    roles: dict[str, str] = field(default_factory=dict)
    idea_titles: dict[str, list[str]] = field(default_factory=dict)


def context_from_case(case) -> CaseContext:
    link = case.company_link
    idea_titles: dict[str, list[str]] = {}
    for idea in case.ideas.values():
        for card_id in idea.all_cards() | {idea.idea_id}:
            idea_titles.setdefault(card_id, []).append(idea.title)
    return CaseContext(
        case_id=case.case_id,
        case_title=case.title,
        consent=link.consent if link is not None else True,
        organization_number=link.organization_number if link else None,
        company_name=link.company_name if link else None,
        country=link.country if link else None,
        postcode=link.postcode if link else None,
        nace_code=link.nace_code if link else None,
        client_id=case.settings.template_id,
        relating_to_whole_company=case.settings.relates_to_whole_company,
        roles={pid: p.case_role.value for pid, p in case.participants.items()},
        idea_titles=idea_titles,
    )


def load_case_contexts(journal_path: str | Path) -> dict[str, CaseContext] | None:
    """Contexts from the cases.json next to the journal; None if absent.

    None means "no case store at all": the transform then synthesizes a
    minimal context per case id instead of treating every event as orphaned.
    """
    path = Path(journal_path).with_name("cases.json")
    if not path.exists():
        return None
    return {case_id: context_from_case(case) for case_id, case in load_cases(path).items()}


def synthesized_context(case_id: str) -> CaseContext:
    return CaseContext(case_id=case_id, case_title=case_id)


# -- extract -------------------------------------------------------------------


def extract(journal: EventJournal, watermark: int, batch_size: int) -> list[JournalEvent]:
    return journal.read_since(watermark, batch_size)


# -- coalesce ------------------------------------------------------------------


def coalesce(batch: list[JournalEvent], window_seconds: int) -> list[JournalEvent]:
    """Collapse rapid same-author edit chains within one batch.

    A Create absorbs in-window Updates by the same participant (identity and
    timestamp stay the Create's; content becomes the last absorbed edit's).
    Runs of Updates collapse to the last one. Anything else on the card, or
    an edit by someone else, breaks the chain. The window is measured
    between consecutive raw events, so a slow steady editor still coalesces.
    """
    if window_seconds <= 0:
        return list(batch)
    survivors: list[JournalEvent] = []
    chain_index: dict[str, int] = {}
    chain_tail: dict[str, float] = {}
    for event in batch:
        card_id = event.card_id
        merged = False
        if (
            event.action is ActionType.UPDATE
            and card_id in chain_index
            and (event.timestamp.timestamp() - chain_tail[card_id]) <= window_seconds
        ):
            previous = survivors[chain_index[card_id]]
            if previous.participant_id == event.participant_id:
                if previous.action is ActionType.CREATE:
                    survivors[chain_index[card_id]] = replace(
                        previous,
                        title=event.title,
                        description=event.description,
                        payload=event.payload,
                        idea_ref=event.idea_ref,
                    )
                else:
                    survivors[chain_index[card_id]] = event
                chain_tail[card_id] = event.timestamp.timestamp()
                merged = True
        if not merged:
            survivors.append(event)
            if event.action in (ActionType.CREATE, ActionType.UPDATE):
                chain_index[card_id] = len(survivors) - 1
                chain_tail[card_id] = event.timestamp.timestamp()
            else:
                chain_index.pop(card_id, None)
                chain_tail.pop(card_id, None)
    return survivors


# -- transform -----------------------------------------------------------------


def transform(
    event: JournalEvent,
    context: CaseContext | None,
    company: CompanyRecord | None = None,
) -> WarehouseRecord:
    """Denormalize one event into a warehouse record.

    Identifier snapshot: company name, country, postcode and NACE code come
    from the registry record valid now (falling back to the stored link),
    while the stable keys remain case_id and organization_number.
    """
    if context is None:
        raise OrphanEvent(f"event {event.event_id} references unknown case {event.case_id}")

    company_name = context.company_name
    country = context.country
    postcode = context.postcode
    nace_code = context.nace_code
    if company is not None:
        company_name = company.company_name
        country = company.country
        postcode = company.postcode
        nace_code = company.nace_code

    idea_title: str | None = None
    if event.idea_ref is not None:
        titles = context.idea_titles.get(event.idea_ref, [])
        idea_title = titles[0] if len(titles) == 1 else None
    else:
        titles = context.idea_titles.get(event.card_id, [])
        idea_title = titles[0] if len(titles) == 1 else None

    record = WarehouseRecord(
        source=JOURNAL,
        event_id=event.event_id,
        timestamp=format_timestamp(event.timestamp),
        event_category=event.category.id,
        action_type=event.action.value,
        case_id=event.case_id,
        case_title=context.case_title,
        case_participant=event.participant_id,
        company_name=company_name,
        organization_number=context.organization_number,
        country=country,
        postcode=postcode,
        nace_code=nace_code,
        added_by_case_role=context.roles.get(event.participant_id) if event.participant_id else None,
        client_id=context.client_id,
        relating_to_whole_company=context.relating_to_whole_company,
        event_title=event.title or None,
        event_description=event.description or None,
        idea_model_title=idea_title,
    )
    if event.payload is not None:
        for name, value in event.payload.to_fields().items():
            setattr(record, name, value)
    return record


def registry_record(revent: RegistryEvent, company: CompanyRecord) -> WarehouseRecord:
    record = WarehouseRecord(
        source=REGISTRY,
        event_id=revent.event_id,
        timestamp=format_timestamp(revent.timestamp),
        event_category=revent.category_id,
        action_type=ActionType.CREATE.value,
        company_name=revent.company_name,
        organization_number=revent.organization_number,
        country=revent.country,
        postcode=company.postcode,
        nace_code=company.nace_code,
    )
    for name, value in revent.payload.items():
        setattr(record, name, value)
    return record


# -- load / run ------------------------------------------------------------------


AfterBatch = Callable[[int, EtlStats], None]


class _CompanyCache:
    def __init__(self, registry: Registry | None):
        self._registry = registry
        self._cache: dict[str, CompanyRecord | None] = {}

    def get(self, organization_number: str | None) -> CompanyRecord | None:
        if organization_number is None or self._registry is None:
            return None
        if organization_number not in self._cache:
            try:
                self._cache[organization_number] = self._registry.fetch_company(
                    organization_number
                )
            except NotFound:
                self._cache[organization_number] = None
            except RegistryUnavailable as exc:
                log.warning("registry lookup failed for %s: %s", organization_number, exc)
                self._cache[organization_number] = None
        return self._cache[organization_number]


def run(
    config: EtlConfig,
    after_batch: AfterBatch | None = None,
    registry_factory: Callable[[str], Registry] = open_registry,
) -> EtlStats:
    config.validate()
    journal_path = Path(config.journal)
    if not journal_path.exists():
        raise SourceUnavailable(f"no journal at {journal_path}")

    lock = FileLock(str(config.warehouse) + ".lock")
    try:
        lock.acquire(timeout=LOCK_TIMEOUT_SECONDS)
    except Timeout as exc:
        raise SinkUnavailable(f"another run holds the lock on {config.warehouse}") from exc

    stats = EtlStats()
    try:
        contexts = load_case_contexts(journal_path)
        registry = registry_factory(config.registry) if config.registry else None
        companies = _CompanyCache(registry)
        journal = EventJournal(journal_path)
        try:
            with WarehouseStore(config.warehouse) as store:
                _run_journal_stage(
                    journal, store, config, contexts, companies, stats, after_batch
                )
                if contexts is not None:
                    _sweep_consent(store, contexts)
                    _merge_registry(store, contexts, registry, stats)
                store.set_state(
                    "last_run",
                    json.dumps(
                        {"at": format_timestamp(utc_now()), **stats.as_dict()},
                        sort_keys=True,
                    ),
                )
        finally:
            journal.close()
    finally:
        lock.release()
    return stats


def _run_journal_stage(
    journal: EventJournal,
    store: WarehouseStore,
    config: EtlConfig,
    contexts: dict[str, CaseContext] | None,
    companies: _CompanyCache,
    stats: EtlStats,
    after_batch: AfterBatch | None,
) -> None:
    watermark = store.watermark()
    while True:
        events = extract(journal, watermark, config.batch_size)
        if not events:
            break
        survivors = coalesce(events, config.coalesce_window_seconds)
        stats.extracted += len(events)
        stats.coalesced_away += len(events) - len(survivors)
        records = []
        for event in survivors:
            if contexts is None:
                context = synthesized_context(event.case_id)
            else:
                context = contexts.get(event.case_id)
            if context is None:
                stats.orphaned += 1
                log.warning(
                    "skipping event %s: case %s not in the case store",
                    event.event_id,
                    event.case_id,
                )
                continue
            if not context.consent:
                stats.skipped_consent += 1
                continue
            record = transform(event, context, companies.get(context.organization_number))
            validate_record(record)
            records.append(record)
        watermark = events[-1].event_id
        try:
            store.upsert_batch(records, watermark=watermark)
        except CaseboardError as exc:
            raise EtlFailure("load", stats, exc) from exc
        stats.loaded += len(records)
        stats.batches += 1
        if after_batch is not None:
            after_batch(stats.batches, stats)


def _sweep_consent(store: WarehouseStore, contexts: dict[str, CaseContext]) -> None:
    """Opt-outs take effect on the next run: the case's rows leave the
    warehouse, and registry rows stay only while some consenting case still
    links that company."""
    consenting_orgs = {
        c.organization_number for c in contexts.values() if c.consent and c.organization_number
    }
    for context in contexts.values():
        if not context.consent:
            store.delete_case(context.case_id)
            if (
                context.organization_number
                and context.organization_number not in consenting_orgs
            ):
                store.delete_registry_company(context.organization_number)


def _merge_registry(
    store: WarehouseStore,
    contexts: dict[str, CaseContext],
    registry: Registry | None,
    stats: EtlStats,
) -> None:
    if registry is None:
        return
    orgs = sorted(
        {c.organization_number for c in contexts.values() if c.consent and c.organization_number}
    )
    for org in orgs:
        try:
            company = registry.fetch_company(org)
        except NotFound:
            continue
        except RegistryUnavailable as exc:
            raise EtlFailure("registry-merge", stats, exc) from exc
        records = [registry_record(e, company) for e in registry_to_events(company)]
        for record in records:
            validate_record(record)
        store.upsert_batch(records)
        stats.registry_events += len(records)


def rebuild(
    config: EtlConfig,
    after_batch: AfterBatch | None = None,
    registry_factory: Callable[[str], Registry] = open_registry,
) -> EtlStats:
    """Full re-run from watermark 0 into a fresh warehouse file."""
    warehouse = Path(config.warehouse)
    for path in (warehouse, Path(str(warehouse) + "-wal"), Path(str(warehouse) + "-shm")):
        if path.exists():
            path.unlink()
    return run(config, after_batch, registry_factory)


def status(config: EtlConfig) -> dict:
    config.validate()
    warehouse = Path(config.warehouse)
    if not warehouse.exists():
        return {"warehouse": str(warehouse), "exists": False, "watermark": 0}
    with WarehouseStore(warehouse) as store:
        last_run_raw = store.get_state("last_run")
        return {
            "warehouse": str(warehouse),
            "exists": True,
            "watermark": store.watermark(),
            "records": store.count(),
            "journal_records": store.count(JOURNAL),
            "registry_records": store.count(REGISTRY),
            "cases": len(store.case_ids()),
            "last_run": json.loads(last_run_raw) if last_run_raw else None,
        }
