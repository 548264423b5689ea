import pytest

from archivecurator.curation import ActivityKind, ResourceDraft
from archivecurator.domain import SourceKind, SourceProvenance
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
from archivecurator.errors import EmptyBody, NotMember, ReadOnlyViolation
from archivecurator.ingest import import_collection, parse_manifest

from conftest import manifest_bytes


@pytest.fixture
def setup(store):
    gid = store.create_group("alice", "Workbench")
    rid = store.add_resource(
        gid,
        ResourceDraft(
            original_url="http://example.org/page",
            title="A page",
            source=SourceProvenance(kind=SourceKind.UPLOAD),
        ),
        "alice",
    )
    return store, gid, rid


@pytest.fixture
def imported_rid(store):
    manifest = parse_manifest(
        manifest_bytes("c1", "Imported", seeds=[{"url": "http://archived.example.org/"}])
    )
    gid = import_collection(store, manifest, actor="importer")
    return gid, store.resources_of(gid)[0].id


class TestTags:
    def test_case_variants_collapse(self, setup):
        store, gid, rid = setup
        add_tag(store, rid, "Tibet", "alice")
        add_tag(store, rid, "tibet", "alice")
        assert store.require_resource(rid).tags == frozenset({"tibet"})

    def test_add_idempotent_no_duplicate_events(self, setup):
        store, gid, rid = setup
        add_tag(store, rid, "tibet", "alice")
        events_after_first = len(store.activity[gid])
        add_tag(store, rid, "tibet", "alice")
        assert len(store.activity[gid]) == events_after_first

    def test_remove_absent_tag_is_noop(self, setup):
        store, gid, rid = setup
        remove_tag(store, rid, "ghost", "alice")
        assert store.require_resource(rid).tags == frozenset()

    def test_remove_idempotent(self, setup):
        store, gid, rid = setup
        add_tag(store, rid, "tibet", "alice")
        remove_tag(store, rid, "tibet", "alice")
        remove_tag(store, rid, "tibet", "alice")
        assert store.require_resource(rid).tags == frozenset()

    def test_tag_on_imported_resource_rejected(self, store, imported_rid):
        _, rid = imported_rid
        with pytest.raises(ReadOnlyViolation):
            add_tag(store, rid, "tibet", "importer")

    def test_tag_by_non_member_rejected(self, setup):
        store, gid, rid = setup
        with pytest.raises(NotMember):
            add_tag(store, rid, "tibet", "mallory")


class TestComments:
    def test_ordered_by_creation(self, setup):
        store, gid, rid = setup
        add_comment(store, rid, "first", "alice")
        add_comment(store, rid, "second", "alice")
        bodies = [c.body for c in store.require_resource(rid).comments]
        assert bodies == ["first", "second"]
        times = [c.created_at for c in store.require_resource(rid).comments]
        assert times == sorted(times)

    def test_empty_body_rejected(self, setup):
        store, gid, rid = setup
        with pytest.raises(EmptyBody):
            add_comment(store, rid, "   ", "alice")

    def test_comment_on_copy_of_read_only_resource_allowed(self, store, imported_rid):
        _, source_rid = imported_rid
        gid = store.create_group("bob", "Bob's group")
        rid = store.copy_resource(gid, source_rid, "bob")
        comment_id = add_comment(store, rid, "worth keeping", "bob")
        assert comment_id
        assert store.activity[gid][-1].kind == ActivityKind.COMMENT_ADDED

    def test_comment_on_imported_resource_rejected(self, store, imported_rid):
        _, rid = imported_rid
        with pytest.raises(ReadOnlyViolation):
            add_comment(store, rid, "nope", "importer")


class TestEditMetadata:
    def test_patch_author_only(self, setup):
        store, gid, rid = setup
        before = store.require_resource(rid)
        edit_metadata(store, rid, MetadataPatch(author="J. Curator"), "alice")
        after = store.require_resource(rid)
        assert after.author == "J. Curator"
        assert after.title == before.title
        assert after.description == before.description

    def test_custom_fields_stored_only(self, setup):
        store, gid, rid = setup
        edit_metadata(store, rid, MetadataPatch(custom_fields={"region": "Tibet"}), "alice")
        after = store.require_resource(rid)
        assert after.custom_fields == {"region": "Tibet"}
        assert after.tags == frozenset()  # custom fields never leak into tags

    def test_custom_fields_merge(self, setup):
        store, gid, rid = setup
        edit_metadata(store, rid, MetadataPatch(custom_fields={"a": "1"}), "alice")
        edit_metadata(store, rid, MetadataPatch(custom_fields={"b": "2"}), "alice")
        assert store.require_resource(rid).custom_fields == {"a": "1", "b": "2"}

    def test_edit_on_imported_group_rejected(self, store, imported_rid):
        _, rid = imported_rid
        with pytest.raises(ReadOnlyViolation):
            edit_metadata(store, rid, MetadataPatch(title="new"), "importer")

    def test_empty_patch_changes_nothing(self, setup):
        store, gid, rid = setup
        events = len(store.activity[gid])
        edit_metadata(store, rid, MetadataPatch(), "alice")
        assert len(store.activity[gid]) == events


class TestCrawlAnnotation:
    def test_set_and_read_back(self, setup):
        store, gid, rid = setup
        annotation = CrawlAnnotation(
            frequency=CrawlFrequency.WEEKLY, depth=CrawlDepth.SITE, rationale="active site"
        )
        set_crawl_annotation(store, rid, gid, annotation, "alice")
        assert store.get_annotation(rid, gid) == annotation

    def test_second_set_wins(self, setup):
        store, gid, rid = setup
        first = CrawlAnnotation(frequency=CrawlFrequency.DAILY, depth=CrawlDepth.PAGE_ONLY)
        second = CrawlAnnotation(frequency=CrawlFrequency.MONTHLY, depth=CrawlDepth.SITE)
        set_crawl_annotation(store, rid, gid, first, "alice")
        set_crawl_annotation(store, rid, gid, second, "alice")
        assert store.get_annotation(rid, gid) == second

    def test_read_only_group_rejected(self, store, imported_rid):
        gid, rid = imported_rid
        annotation = CrawlAnnotation(frequency=CrawlFrequency.ONCE, depth=CrawlDepth.PAGE_ONLY)
        with pytest.raises(ReadOnlyViolation):
            set_crawl_annotation(store, rid, gid, annotation, "importer")
