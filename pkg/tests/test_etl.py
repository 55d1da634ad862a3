"""Pipeline tests: coalescing, batching, consent, registry merge, recovery.

The conservation law checked throughout: every extracted event is accounted
for as loaded, coalesced away, skipped for consent, or orphaned.
"""

from __future__ import annotations

import random
from datetime import timedelta

import pytest
from filelock import FileLock

from caseboard.domain.payloads import make_payload
from caseboard.domain.taxonomy import CATEGORY_BY_ID, ActionType
from caseboard.errors import (
    InvalidSettings,
    OrphanEvent,
    RegistryUnavailable,
    SinkUnavailable,
    SourceUnavailable,
)
from caseboard.etl.config import EtlConfig, load_config, parse_config_text, render_config
from caseboard.etl.pipeline import (
    CaseContext,
    EtlFailure,
    coalesce,
    rebuild,
    run,
    status,
    transform,
)
from caseboard.fixtures.registry_gen import fixture_org_number, write_registry_fixture
from caseboard.journal import EventJournal, JournalEvent
from caseboard.platform.service import CompanyLink, PlatformService
from caseboard.platform.state import save_cases
from caseboard.registry.types import company_from_dict
from caseboard.warehouse.export import render_record_lines
from caseboard.warehouse.records import JOURNAL, REGISTRY
from caseboard.warehouse.store import WarehouseStore
from tests.conftest import EPOCH, default_settings, make_participant, ticking_clock

REGISTRY_SEED = 31337
ANCHOR_ORG = fixture_org_number(REGISTRY_SEED, 0)


def ev(event_id, card_id, action, offset_seconds, *, pid="p1", title="", case_id="c1"):
    """Hand-built journal event for coalescing tests (category 4 is payload-free)."""
    action = ActionType(action)
    return JournalEvent(
        event_id=event_id,
        case_id=case_id,
        card_id=card_id,
        category=CATEGORY_BY_ID[4],
        action=action,
        participant_id=pid,
        timestamp=EPOCH + timedelta(seconds=offset_seconds),
        title=title,
        description="",
        payload=None if action is ActionType.DELETE else make_payload(4, {}),
    )


# -- coalescing ---------------------------------------------------------------


def test_create_absorbs_rapid_update_inside_window():
    batch = [ev(1, "k", "Create", 0, title="draft"), ev(2, "k", "Update", 10, title="final")]
    assert len(coalesce(batch, 0)) == 2
    merged = coalesce(batch, 30)
    assert len(merged) == 1
    # Identity stays the Create's; content becomes the last edit's.
    assert merged[0].event_id == 1
    assert merged[0].action is ActionType.CREATE
    assert merged[0].timestamp == batch[0].timestamp
    assert merged[0].title == "final"


def test_update_runs_collapse_to_last():
    batch = [
        ev(1, "k", "Update", 0, title="a"),
        ev(2, "k", "Update", 5, title="b"),
        ev(3, "k", "Update", 10, title="c"),
    ]
    merged = coalesce(batch, 30)
    assert [e.event_id for e in merged] == [3]
    assert merged[0].title == "c"


def test_window_is_between_consecutive_events():
    # 20s gaps under a 30s window chain together even though the whole
    # run spans 40s.
    batch = [
        ev(1, "k", "Create", 0, title="a"),
        ev(2, "k", "Update", 20, title="b"),
        ev(3, "k", "Update", 40, title="c"),
    ]
    merged = coalesce(batch, 30)
    assert [e.event_id for e in merged] == [1]
    assert merged[0].title == "c"


def test_gap_beyond_window_breaks_chain():
    batch = [ev(1, "k", "Create", 0), ev(2, "k", "Update", 31)]
    assert len(coalesce(batch, 30)) == 2


def test_other_participant_breaks_chain():
    batch = [
        ev(1, "k", "Create", 0, title="a"),
        ev(2, "k", "Update", 5, pid="p2", title="b"),
        ev(3, "k", "Update", 10, pid="p2", title="c"),
    ]
    merged = coalesce(batch, 60)
    # p2's first edit survives alongside the Create; p2's own run collapses.
    assert [e.event_id for e in merged] == [1, 3]


def test_delete_never_merges_and_breaks_chain():
    batch = [
        ev(1, "k", "Create", 0),
        ev(2, "k", "Delete", 5),
        ev(3, "k", "Create", 10),
        ev(4, "k", "Update", 15),
    ]
    merged = coalesce(batch, 60)
    assert [e.event_id for e in merged] == [1, 2, 3]


def test_cards_coalesce_independently():
    batch = [
        ev(1, "a", "Create", 0, title="a0"),
        ev(2, "b", "Create", 1, title="b0"),
        ev(3, "a", "Update", 2, title="a1"),
        ev(4, "b", "Update", 3, title="b1"),
    ]
    merged = coalesce(batch, 60)
    assert [(e.card_id, e.title) for e in merged] == [("a", "a1"), ("b", "b1")]


def test_random_batches_never_merge_across_cards_or_participants():
    rng = random.Random(88)
    for _ in range(200):
        batch = []
        clock = 0
        for event_id in range(1, rng.randint(2, 25)):
            clock += rng.choice([1, 5, 40])
            batch.append(
                ev(
                    event_id,
                    rng.choice("xyz"),
                    rng.choice(["Create", "Update", "Delete"]),
                    clock,
                    pid=rng.choice(["p1", "p2"]),
                )
            )
        merged = coalesce(batch, 30)
        by_id = {e.event_id: e for e in batch}
        per_card: dict[str, list[int]] = {}
        for survivor in merged:
            original = by_id[survivor.event_id]
            # A survivor may carry absorbed content, but never from another
            # card or author.
            assert survivor.card_id == original.card_id
            assert survivor.participant_id == original.participant_id
            per_card.setdefault(survivor.card_id, []).append(survivor.event_id)
        # Survivors keep their chain's position, so ordering holds per card.
        for ids in per_card.values():
            assert ids == sorted(ids)


# -- transform ------------------------------------------------------------------


def test_transform_requires_case_context():
    with pytest.raises(OrphanEvent):
        transform(ev(1, "k", "Create", 0), None)


def test_transform_snapshots_company_over_stored_link(tmp_path):
    context = CaseContext(
        case_id="c1",
        case_title="T",
        organization_number=ANCHOR_ORG,
        company_name="Stale Name",
        country="SE",
    )
    doc = {
        "organization_number": ANCHOR_ORG,
        "company_name": "Fresh Name AS",
        "country": "NO",
        "postcode": "7010",
        "nace_code": "71.129",
        "annual_figures": [],
    }
    record = transform(ev(7, "k", "Create", 0), context, company_from_dict(doc))
    assert record.company_name == "Fresh Name AS"
    assert record.country == "NO"
    assert record.organization_number == ANCHOR_ORG
    assert record.source == JOURNAL
    assert record.event_id == 7


# -- full runs ---------------------------------------------------------------------


def build_scenario(tmp_path, *, extra_cases=0):
    """A journal plus case store: one linked case with a handful of cards."""
    journal_path = tmp_path / "journal.ndjson"
    journal = EventJournal(journal_path, clock=ticking_clock())
    service = PlatformService(journal)
    case = service.create_case(
        "Fjellvik Drone Survey",
        default_settings(),
        CompanyLink("Fjellvik AS", ANCHOR_ORG, "NO"),
        period_start="2017-02",
    )
    service.add_participant(case.case_id, make_participant())
    for n in range(3):
        event = service.mutate_card(
            case.case_id, "p1", "Resource", "Values", "Create", title=f"v{n}"
        )
    service.mutate_card(
        case.case_id, "p1", "Resource", "Values", "Update",
        card_id=event.card_id, title="v2 (edited)",
    )
    for i in range(extra_cases):
        other = service.create_case(
            f"Side project {i}", default_settings(), period_start="2017-02"
        )
        service.add_participant(other.case_id, make_participant("p9"))
        service.mutate_card(other.case_id, "p9", "Resource", "Vision", "Create", title="x")
    save_cases(service, tmp_path / "cases.json")
    journal.close()
    config = EtlConfig(journal=str(journal_path), warehouse=str(tmp_path / "wh.sqlite"))
    return config, service, case


def assert_conservation(stats):
    assert stats.extracted == (
        stats.loaded + stats.coalesced_away + stats.skipped_consent + stats.orphaned
    )


def test_run_loads_everything_once(tmp_path):
    config, service, case = build_scenario(tmp_path)
    stats = run(config)
    assert_conservation(stats)
    assert stats.coalesced_away == 0
    assert stats.skipped_consent == 0
    with WarehouseStore(config.warehouse) as store:
        assert store.count(JOURNAL) == stats.loaded == stats.extracted
        assert store.watermark() == stats.extracted
        assert store.case_ids() == [case.case_id]


def test_run_is_idempotent(tmp_path):
    config, *_ = build_scenario(tmp_path)
    run(config)
    with WarehouseStore(config.warehouse) as store:
        first = render_record_lines(store)
    again = run(config)
    assert again.extracted == 0
    assert again.loaded == 0
    with WarehouseStore(config.warehouse) as store:
        assert render_record_lines(store) == first


def test_run_picks_up_only_new_events(tmp_path):
    config, service, case = build_scenario(tmp_path)
    first = run(config)
    journal = EventJournal(config.journal, clock=ticking_clock(EPOCH + timedelta(days=1)))
    service2 = PlatformService(journal)
    service2.cases = service.cases
    service2.mutate_card(
        case.case_id, "p1", "Resource", "Vision", "Create",
        card_id=f"{case.case_id}-card-000999", title="new",
    )
    save_cases(service2, tmp_path / "cases.json")
    journal.close()
    second = run(config)
    assert second.extracted == 1
    assert second.loaded == 1
    with WarehouseStore(config.warehouse) as store:
        assert store.count(JOURNAL) == first.loaded + 1


def test_batching_and_after_batch_hook(tmp_path):
    config, *_ = build_scenario(tmp_path)
    config = EtlConfig(
        journal=config.journal, warehouse=config.warehouse, batch_size=2
    )
    seen = []
    stats = run(config, after_batch=lambda n, s: seen.append((n, s.loaded)))
    assert stats.batches == -(-stats.extracted // 2)  # ceil division
    assert [n for n, _ in seen] == list(range(1, stats.batches + 1))
    loaded_counts = [loaded for _, loaded in seen]
    assert loaded_counts == sorted(loaded_counts)


def test_crash_between_batches_resumes_without_loss(tmp_path):
    config, *_ = build_scenario(tmp_path)
    config = EtlConfig(journal=config.journal, warehouse=config.warehouse, batch_size=2)

    def crash(batch_no, stats):
        if batch_no == 2:
            raise RuntimeError("power cut")

    with pytest.raises(RuntimeError):
        run(config, after_batch=crash)
    with WarehouseStore(config.warehouse) as store:
        partial = store.count(JOURNAL)
        watermark = store.watermark()
    assert partial == 4  # two committed batches of two
    assert watermark == 4

    resumed = run(config)
    assert resumed.extracted > 0
    with WarehouseStore(config.warehouse) as store:
        total = store.count(JOURNAL)

    fresh = EtlConfig(journal=config.journal, warehouse=str(tmp_path / "fresh.sqlite"))
    baseline = run(fresh)
    assert total == baseline.loaded


def test_coalescing_applies_during_run(tmp_path):
    config, *_ = build_scenario(tmp_path)
    # The scenario's Create..Update pair on the same card sits 60s apart.
    config = EtlConfig(
        journal=config.journal, warehouse=config.warehouse,
        coalesce_window_seconds=3600,
    )
    stats = run(config)
    assert stats.coalesced_away >= 1
    assert_conservation(stats)
    with WarehouseStore(config.warehouse) as store:
        assert store.count(JOURNAL) == stats.loaded


# -- consent ----------------------------------------------------------------------


def test_opted_out_case_is_skipped_and_swept(tmp_path):
    config, service, case = build_scenario(tmp_path, extra_cases=1)
    run(config)
    with WarehouseStore(config.warehouse) as store:
        before = len(store.records_for_case(case.case_id))
        total_before = store.count()
    assert before > 0

    service.set_consent(case.case_id, False)
    save_cases(service, tmp_path / "cases.json")
    swept = run(config)
    assert swept.extracted == 0
    with WarehouseStore(config.warehouse) as store:
        assert store.records_for_case(case.case_id) == []
        assert store.count() == total_before - before

    # Restoring takes a rebuild: the watermark already sits past the
    # case's events, so an incremental run has nothing to re-extract.
    service.set_consent(case.case_id, True)
    save_cases(service, tmp_path / "cases.json")
    run(config)
    with WarehouseStore(config.warehouse) as store:
        assert store.records_for_case(case.case_id) == []
    rebuild(config)
    with WarehouseStore(config.warehouse) as store:
        assert len(store.records_for_case(case.case_id)) == before
        assert store.count() == total_before


def test_new_events_of_opted_out_case_never_load(tmp_path):
    config, service, case = build_scenario(tmp_path)
    service.set_consent(case.case_id, False)
    save_cases(service, tmp_path / "cases.json")
    stats = run(config)
    assert stats.skipped_consent == stats.extracted > 0
    assert stats.loaded == 0
    assert_conservation(stats)


# -- registry merge ------------------------------------------------------------------


def test_registry_rows_merged_for_linked_consenting_company(tmp_path):
    config, service, case = build_scenario(tmp_path)
    registry_path = write_registry_fixture(REGISTRY_SEED, 5, tmp_path / "registry.json")
    config = EtlConfig(
        journal=config.journal, warehouse=config.warehouse,
        registry=str(registry_path),
    )
    stats = run(config)
    # The anchor company: five full years of ten values, one status event.
    assert stats.registry_events == 51
    with WarehouseStore(config.warehouse) as store:
        assert store.count(REGISTRY) == 51
        rows = store.registry_records_for_org(ANCHOR_ORG)
        assert len(rows) == 51
    # Companies nobody links stay out of the warehouse entirely.
    other_org = fixture_org_number(REGISTRY_SEED, 1)
    with WarehouseStore(config.warehouse) as store:
        assert store.registry_records_for_org(other_org) == []


def test_registry_rows_leave_with_the_last_consenting_case(tmp_path):
    config, service, case = build_scenario(tmp_path)
    registry_path = write_registry_fixture(REGISTRY_SEED, 3, tmp_path / "registry.json")
    config = EtlConfig(
        journal=config.journal, warehouse=config.warehouse,
        registry=str(registry_path),
    )
    run(config)
    service.set_consent(case.case_id, False)
    save_cases(service, tmp_path / "cases.json")
    run(config)
    with WarehouseStore(config.warehouse) as store:
        assert store.count(REGISTRY) == 0


def test_registry_outage_fails_merge_stage_but_keeps_journal_rows(tmp_path):
    config, *_ = build_scenario(tmp_path)
    config = EtlConfig(
        journal=config.journal, warehouse=config.warehouse, registry="stub://down"
    )

    class DownRegistry:
        def fetch_company(self, org):
            raise RegistryUnavailable("down")

    with pytest.raises(EtlFailure) as excinfo:
        run(config, registry_factory=lambda loc: DownRegistry())
    assert excinfo.value.stage == "registry-merge"
    assert excinfo.value.code == "etl_failure"
    assert excinfo.value.stats.loaded > 0
    with WarehouseStore(config.warehouse) as store:
        assert store.count(JOURNAL) == excinfo.value.stats.loaded
        assert store.count(REGISTRY) == 0


# -- orphans and missing context -----------------------------------------------------


def test_events_of_unknown_cases_are_counted_as_orphans(tmp_path):
    config, *_ = build_scenario(tmp_path)
    with EventJournal(config.journal, clock=ticking_clock(EPOCH + timedelta(days=2))) as j:
        j.append(case_id="ghost-case", category=4, action="Create", card_id="g1")
    stats = run(config)
    assert stats.orphaned == 1
    assert_conservation(stats)
    with WarehouseStore(config.warehouse) as store:
        assert store.records_for_case("ghost-case") == []


def test_journal_without_case_store_synthesizes_contexts(tmp_path):
    journal_path = tmp_path / "journal.ndjson"
    with EventJournal(journal_path, clock=ticking_clock()) as j:
        j.append(case_id="lone", category=4, action="Create", card_id="c")
    config = EtlConfig(journal=str(journal_path), warehouse=str(tmp_path / "wh.sqlite"))
    stats = run(config)
    assert stats.loaded == 1
    assert stats.orphaned == 0
    with WarehouseStore(config.warehouse) as store:
        [record] = store.records_for_case("lone")
        assert record.case_title == "lone"
        assert record.company_name is None


# -- failure modes and operability ----------------------------------------------------


def test_missing_journal_is_source_unavailable(tmp_path):
    config = EtlConfig(
        journal=str(tmp_path / "absent.ndjson"), warehouse=str(tmp_path / "wh.sqlite")
    )
    with pytest.raises(SourceUnavailable):
        run(config)


def test_held_lock_is_sink_unavailable(tmp_path, monkeypatch):
    config, *_ = build_scenario(tmp_path)
    monkeypatch.setattr("caseboard.etl.pipeline.LOCK_TIMEOUT_SECONDS", 0.1)
    lock = FileLock(config.warehouse + ".lock")
    lock.acquire()
    try:
        with pytest.raises(SinkUnavailable):
            run(config)
    finally:
        lock.release()


def test_status_before_and_after_run(tmp_path):
    config, service, case = build_scenario(tmp_path)
    empty = status(config)
    assert empty == {"warehouse": config.warehouse, "exists": False, "watermark": 0}
    stats = run(config)
    report = status(config)
    assert report["exists"] is True
    assert report["watermark"] == stats.extracted
    assert report["records"] == stats.loaded
    assert report["journal_records"] == stats.loaded
    assert report["cases"] == 1
    assert report["last_run"]["loaded"] == stats.loaded


def test_rebuild_recreates_the_same_warehouse(tmp_path):
    config, *_ = build_scenario(tmp_path)
    first = run(config)
    with WarehouseStore(config.warehouse) as store:
        before = render_record_lines(store)
    rebuilt = rebuild(config)
    assert rebuilt.loaded == first.loaded
    with WarehouseStore(config.warehouse) as store:
        assert render_record_lines(store) == before


# -- configuration ------------------------------------------------------------------------


def test_config_text_round_trip(tmp_path):
    config = EtlConfig(
        journal="j.ndjson", warehouse="w.sqlite", registry="r.json",
        coalesce_window_seconds=30, batch_size=500,
    )
    assert parse_config_text(render_config(config)) == config
    path = tmp_path / "etl.conf"
    path.write_text(render_config(config), encoding="utf-8")
    assert load_config(path) == config


def test_config_comments_and_blank_lines_ignored():
    config = parse_config_text(
        "# pipeline settings\n"
        "\n"
        "journal = j.ndjson   # the source\n"
        "warehouse = w.sqlite\n"
    )
    assert config.journal == "j.ndjson"
    assert config.coalesce_window_seconds == 0
    assert config.batch_size == 1000


@pytest.mark.parametrize(
    "text",
    [
        "journal = j\nwarehouse = w\nbottleneck = 9\n",  # unknown key
        "warehouse = w\n",                               # journal missing
        "journal = j\n",                                 # warehouse missing
        "journal = j\nwarehouse = w\nbatch_size = 0\n",
        "journal = j\nwarehouse = w\ncoalesce_window_seconds = -1\n",
        "journal j\nwarehouse = w\n",                    # not key = value
    ],
)
def test_config_rejects_malformed_text(text):
    with pytest.raises(InvalidSettings):
        parse_config_text(text)


def test_missing_config_file(tmp_path):
    with pytest.raises(InvalidSettings):
        load_config(tmp_path / "absent.conf")
