"""Acceptance gate: one test per release criterion, each printing a
PASS line when its assertions hold.  Run with ``pytest -v -s``."""

import json
import random
import time
from pathlib import Path

import pytest

from archivecurator.captures import (
    Capture,
    Granularity,
    audit_liveness,
    build_timeline,
    format_cdx_response,
    parse_cdx_response,
)
from archivecurator.curation import CurationStore, ExportFormat, ResourceDraft
from archivecurator.domain import SourceKind, SourceProvenance, parse_timestamp14
from archivecurator.enrichment import (
    CrawlAnnotation,
    CrawlDepth,
    CrawlFrequency,
    MetadataPatch,
    add_comment,
    add_tag,
    edit_metadata,
    remove_tag,
    set_crawl_annotation,
)
from archivecurator.errors import CdxSyntax, ServiceError
from archivecurator.ingest import import_collection, list_collections, parse_manifest
from archivecurator.persistence import store_to_snapshot
from archivecurator.search import SearchIndex
from archivecurator.service import CurationService, ServiceConfig

from conftest import StubChecker, manifest_bytes, make_seeds
from search_support import build_corpus, oracle_doc, oracle_filter, random_queries
from test_captures import build_rot_fixture

FIXTURES = Path(__file__).parent / "fixtures"


def ok(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def state_blob(store: CurationStore) -> str:
    return json.dumps(store_to_snapshot(store, 0), sort_keys=True)


def upload(url, title="t", tags=()):
    return ResourceDraft(
        original_url=url,
        title=title,
        source=SourceProvenance(kind=SourceKind.UPLOAD),
        tags=frozenset(tags),
    )


def test_link_rot_report_matches_published_percentages():
    seeds, results = build_rot_fixture()
    started = time.monotonic()
    report = audit_liveness(seeds, checker=StubChecker(results))
    elapsed = time.monotonic() - started
    expected = {"movement sites": (582, 239, 41), "social media": (203, 173, 85), "news articles": (163, 147, 90)}
    for category, (total, alive, percent) in expected.items():
        stats = report.categories[category]
        assert (stats.total, stats.alive, stats.percent_alive) == (total, alive, percent)
    assert elapsed < 5.0, f"audit took {elapsed:.2f}s"
    ok(f"link-rot 41/85/90 in {elapsed:.2f}s")


def test_search_oracle_equivalence_at_scale():
    pairs, group_titles = build_corpus(5000, seed=97)
    index = SearchIndex()
    for resource, ctx in pairs:
        index.index_resource(resource, ctx)
    docs = [oracle_doc(r, c) for r, c in pairs]
    queries = random_queries(1000, pairs, group_titles, seed=41)

    def drop_zeros(counts):
        return {dim: {k: v for k, v in values.items() if v} for dim, values in counts.items()}

    started = time.monotonic()
    for query in queries:
        expected_ids, expected_counts = oracle_filter(docs, query)
        assert index.matching_ids(query) == expected_ids, query
        result = index.search(query)
        assert result.total == len(expected_ids)
        assert drop_zeros(result.facet_counts) == drop_zeros(expected_counts), query
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.2f}s"
    ok(f"search oracle 1000 queries x 5000 docs in {elapsed:.1f}s")


def test_read_only_preservation_under_random_operations():
    rng = random.Random(20111117)
    store = CurationStore()
    imported = []
    for cid, title, count in [("col-a", "Collection A", 40), ("col-b", "Collection B", 60)]:
        manifest = parse_manifest(
            manifest_bytes(cid, title, collector="Keeper", seeds=make_seeds(count, prefix=cid))
        )
        imported.append(import_collection(store, manifest, actor="importer"))
    baseline = {gid: store.group_snapshot_hash(gid) for gid in imported}

    users = ["alice", "bob", "carol"]
    editable_groups = [store.create_group(u, f"{u}'s desk") for u in users]
    for gid, user in zip(editable_groups, users):
        for other in users:
            store.join_group(gid, other)
    url_counter = [0]

    def any_resource():
        rid = rng.choice(sorted(store.resources))
        return rid

    def editable_group():
        return rng.choice(editable_groups)

    def do_create_group():
        gid = store.create_group(rng.choice(users), f"group-{rng.randrange(10**6)}")
        for user in users:
            store.join_group(gid, user)
        if len(store.require_group(gid).resource_ids) <= 50:
            editable_groups.append(gid)

    def do_subgroup():
        store.create_subgroup(editable_group(), rng.choice(users), "sub")

    def do_upload():
        url_counter[0] += 1
        store.add_resource(
            editable_group(), upload(f"http://fresh{url_counter[0]}.example.org/"), rng.choice(users)
        )

    def do_copy_resource():
        store.copy_resource(editable_group(), any_resource(), rng.choice(users))

    def do_move():
        source = editable_group()
        group = store.require_group(source)
        if not group.resource_ids:
            return
        store.move_resource(rng.choice(group.resource_ids), source, editable_group(), rng.choice(users))

    def do_remove():
        group = store.require_group(editable_group())
        if group.resource_ids:
            store.remove_resource(rng.choice(group.resource_ids), rng.choice(users))

    def do_copy_group():
        source = rng.choice(editable_groups + imported)
        if len(store.require_group(source).resource_ids) <= 50:
            store.copy_group(source, rng.choice(users), "copy")

    def do_merge():
        a, b = rng.choice(editable_groups + imported), rng.choice(editable_groups)
        if (
            len(store.require_group(a).resource_ids) + len(store.require_group(b).resource_ids)
            <= 80
        ):
            store.merge_groups([a, b], rng.choice(users), "merged")

    def do_bulk_tag():
        rids = rng.sample(sorted(store.resources), min(8, len(store.resources)))
        store.bulk_tag(rids, f"tag{rng.randrange(20)}", rng.choice(users))

    def do_group_by_tag():
        store.group_by_tag(f"tag{rng.randrange(20)}", rng.choice(users), "tagged")

    def do_enrich():
        rid = any_resource()
        user = rng.choice(users)
        action = rng.randrange(5)
        try:
            if action == 0:
                add_tag(store, rid, f"tag{rng.randrange(20)}", user)
            elif action == 1:
                remove_tag(store, rid, f"tag{rng.randrange(20)}", user)
            elif action == 2:
                add_comment(store, rid, f"note {rng.randrange(100)}", user)
            elif action == 3:
                edit_metadata(store, rid, MetadataPatch(title=f"T{rng.randrange(100)}"), user)
            else:
                set_crawl_annotation(
                    store,
                    rid,
                    store.home_of(rid),
                    CrawlAnnotation(frequency=CrawlFrequency.WEEKLY, depth=CrawlDepth.SITE),
                    user,
                )
        except ServiceError:
            pass  # read-only targets must refuse; that refusal is the point

    def do_forbidden():
        target = rng.choice(imported)
        try:
            store.add_resource(target, upload("http://nope.example.org/"), "importer")
        except ServiceError:
            pass
        try:
            rid = rng.choice(store.require_group(target).resource_ids)
            store.move_resource(rid, target, editable_group(), "importer")
        except ServiceError:
            pass

    actions = (
        [do_enrich] * 30
        + [do_upload] * 15
        + [do_copy_resource] * 12
        + [do_move] * 8
        + [do_remove] * 6
        + [do_bulk_tag] * 6
        + [do_forbidden] * 6
        + [do_create_group] * 4
        + [do_subgroup] * 2
        + [do_copy_group] * 2
        + [do_merge] * 2
        + [do_group_by_tag] * 1
    )

    operations = 10_000
    started = time.monotonic()
    for i in range(operations):
        try:
            rng.choice(actions)()
        except ServiceError:
            pass  # rejected operations are part of the grammar
        if i % 500 == 0:
            for gid, expected in baseline.items():
                assert store.group_snapshot_hash(gid) == expected, f"violation at op {i}"
    for gid, expected in baseline.items():
        assert store.group_snapshot_hash(gid) == expected
    elapsed = time.monotonic() - started
    ok(f"read-only preservation over {operations} ops in {elapsed:.1f}s")


def test_merge_copy_laws_on_randomized_pairs():
    rng = random.Random(582)
    store = CurationStore()
    pool = [f"http://seed{i}.example.org/p" for i in range(40)]
    pairs = 500
    for i in range(pairs):
        size_a, size_b = rng.randint(0, 12), rng.randint(0, 12)
        urls_a = rng.sample(pool, size_a)
        urls_b = rng.sample(pool, size_b)
        a = store.create_group("alice", f"A{i}")
        b = store.create_group("alice", f"B{i}")
        for url in urls_a:
            store.add_resource(a, upload(url), "alice")
        for url in urls_b:
            store.add_resource(b, upload(url), "alice")

        ab, dropped_ab = store.merge_groups([a, b], "alice", "AB")
        ba, dropped_ba = store.merge_groups([b, a], "alice", "BA")
        urls_ab = {str(r.url) for r in store.resources_of(ab)}
        urls_ba = {str(r.url) for r in store.resources_of(ba)}
        union = set(urls_a) | set(urls_b)
        assert urls_ab == urls_ba == union
        assert dropped_ab == dropped_ba == len(urls_a) + len(urls_b) - len(union)

        # copy isolation, both directions
        source_hash = store.group_snapshot_hash(a)
        copy_gid = store.copy_group(a, "alice", "copy")
        copy_hash = store.group_snapshot_hash(copy_gid)
        store.add_resource(copy_gid, upload(f"http://extra{i}.example.org/"), "alice")
        assert store.group_snapshot_hash(a) == source_hash
        store.add_resource(a, upload(f"http://back{i}.example.org/"), "alice")
        copy_resources = store.require_group(copy_gid).resource_ids
        if copy_resources:
            edit_metadata(store, copy_resources[0], MetadataPatch(title="changed"), "alice")
        assert store.group_snapshot_hash(a) != source_hash  # sanity: a's own edit landed
        store.remove_resource(store.require_group(a).resource_ids[-1], "alice")
        assert store.group_snapshot_hash(a) == source_hash
        assert store.group_snapshot_hash(copy_gid) != copy_hash  # copy took its own edits
    ok(f"merge/copy laws on {pairs} randomized pairs")


def test_cdx_golden_files_round_trip():
    good = sorted((FIXTURES / "cdx").glob("*.cdx"))
    assert len(good) >= 20, "need at least 20 recorded CDX responses"
    for path in good:
        raw = path.read_bytes()
        captures = parse_cdx_response(raw)
        assert captures
        assert format_cdx_response(captures) == raw, path

    bad_index = json.loads((FIXTURES / "cdx_bad" / "index.json").read_text())
    assert bad_index
    for name, expected in bad_index.items():
        with pytest.raises(CdxSyntax) as excinfo:
            parse_cdx_response((FIXTURES / "cdx_bad" / name).read_bytes())
        assert excinfo.value.line == expected["line"], name
    ok(f"CDX golden files: {len(good)} round-trips, {len(bad_index)} rejections")


def test_timeline_conservation_up_to_10000():
    rng = random.Random(14)

    def capture_at(ts):
        return Capture(
            urlkey="org,example)/",
            timestamp=parse_timestamp14(ts),
            original="http://example.org/",
            mime_type="text/html",
            status_code=200,
            digest="A" * 32,
            length=1,
        )

    for n in (1, 7, 123, 2048, 10_000):
        stamps = sorted(
            f"{rng.randint(1998, 2020):04d}{rng.randint(1, 12):02d}{rng.randint(1, 28):02d}"
            f"{rng.randint(0, 23):02d}0000"
            for _ in range(n)
        )
        captures = [capture_at(s) for s in stamps]
        for granularity in Granularity:
            timeline = build_timeline(captures, granularity)
            assert timeline.total == n
            labels = [label for label, _ in timeline.bins]
            assert labels == sorted(set(labels)), "bins must be ordered and unique"
            if granularity == Granularity.YEAR:
                expected = [str(y) for y in range(int(labels[0]), int(labels[-1]) + 1)]
            else:
                first_y, first_m = int(labels[0][:4]), int(labels[0][5:])
                last_y, last_m = int(labels[-1][:4]), int(labels[-1][5:])
                expected = []
                y, m = first_y, first_m
                while (y, m) <= (last_y, last_m):
                    expected.append(f"{y:04d}-{m:02d}")
                    m += 1
                    if m > 12:
                        m, y = 1, y + 1
            assert labels == expected, "bins must be contiguous and zero-filled"
    ok("timeline conservation at n up to 10000, both granularities")


def test_export_import_round_trip_at_occupy_scale():
    store = CurationStore()
    manifest = parse_manifest(
        manifest_bytes(
            "occupy-2950",
            "Occupy Movement 2011/12",
            collector="Internet Archive Global Events",
            seeds=make_seeds(933, prefix="occupy", subjects=["occupy", "movement"]),
        )
    )
    gid = import_collection(store, manifest, actor="importer")
    assert len(store.require_group(gid).resource_ids) == 933

    data = store.export_group(gid, ExportFormat.MANIFEST, "importer")
    reimported = import_collection(store, parse_manifest(data), actor="other")

    def fields(r):
        return (
            str(r.url),
            r.original_url,
            r.title,
            r.description,
            r.author,
            tuple(sorted(r.tags)),
            r.media_type,
            r.source.capture_period,
        )

    original = sorted(fields(r) for r in store.resources_of(gid))
    restored = sorted(fields(r) for r in store.resources_of(reimported))
    assert original == restored
    ok("export/import round-trip at 933 resources")


def test_crash_consistency_over_1000_mutations(tmp_path):
    rng = random.Random(1000)
    config = ServiceConfig(data_dir=tmp_path / "data")
    service = CurationService(config)
    groups = [service.create_group("alice", f"G{i}") for i in range(5)]
    resources = []
    mutations = 5  # the creates above
    i = 0
    while mutations < 1000:
        roll = rng.random()
        if roll < 0.5 or not resources:
            rid = service.add_upload_resource(
                rng.choice(groups), "alice", f"http://m{i}.example.org/", title=f"M{i}"
            )
            resources.append(rid)
            i += 1
        elif roll < 0.7:
            service.add_tag(rng.choice(resources), f"tag{rng.randrange(9)}", "alice")
        elif roll < 0.85:
            service.add_comment(rng.choice(resources), f"note {i}", "alice")
            i += 1
        else:
            service.edit_metadata(
                rng.choice(resources), MetadataPatch(description=f"d{i}"), "alice"
            )
            i += 1
        mutations += 1
    acked_state = state_blob(service.store)

    # kill after ack: drop the process image, replay from disk
    replayed = CurationService(config)
    assert state_blob(replayed.store) == acked_state

    # crash mid-append of an unacknowledged mutation: torn tail, no partial apply
    events = tmp_path / "data" / "events.log"
    with open(events, "ab") as handle:
        handle.write(b'{"seq": 999999, "changes": {"resources": {"rx": {"rec')
    recovered = CurationService(config)
    assert state_blob(recovered.store) == acked_state
    ok("crash-consistency: 1000 mutations replay identically; torn tail dropped")


def test_fixture_ingest_at_paper_scale(tmp_path):
    service = CurationService(ServiceConfig(data_dir=tmp_path / "data"))
    started = time.monotonic()
    for i in range(200):
        data = manifest_bytes(
            f"col-{i:03d}",
            f"Collection {i:03d}",
            collector=f"Institution {i % 9}",
            seeds=make_seeds(20, prefix=f"c{i}x"),
        )
        service.import_manifest(data, "importer")
    listing = service.list_collections()
    elapsed = time.monotonic() - started
    assert len(listing) == 200
    assert sum(c.resource_count for c in listing) == 200 * 20
    assert elapsed < 30.0, f"ingest took {elapsed:.2f}s"
    ok(f"200-collection ingest + list in {elapsed:.1f}s")
