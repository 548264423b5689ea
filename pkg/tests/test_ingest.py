import json

import pytest

from archivecurator.domain import SourceKind
from archivecurator.errors import DuplicateCollection, ManifestSemantic, ManifestSyntax
from archivecurator.ingest import import_collection, list_collections, parse_manifest

from conftest import manifest_bytes, make_seeds


class TestParseManifest:
    def test_minimal_manifest(self):
        data = manifest_bytes("c1", "Tiny", seeds=[{"url": "http://example.org/"}])
        manifest = parse_manifest(data)
        assert manifest.collection_id == "c1"
        assert len(manifest.seeds) == 1
        assert manifest.seeds[0].url == "http://example.org/"

    def test_hrwa_fixture_has_711_seeds(self, hrwa_manifest):
        manifest = parse_manifest(hrwa_manifest)
        assert manifest.title == "Human Rights Web Archive"
        assert manifest.collector_name == "Columbia University Libraries"
        assert len(manifest.seeds) == 711

    def test_short_timestamp_is_semantic_error(self):
        data = manifest_bytes(
            "c1", "Bad", seeds=[{"url": "http://example.org/", "firstCapture": "2008"}]
        )
        with pytest.raises(ManifestSemantic):
            parse_manifest(data)

    def test_invalid_json_line_is_syntax_error(self):
        data = b'{"collectionId": "c1", "title": "T"}\nnot json\n'
        with pytest.raises(ManifestSyntax):
            parse_manifest(data)

    def test_non_object_line_is_syntax_error(self):
        data = b'{"collectionId": "c1", "title": "T"}\n[1, 2]\n'
        with pytest.raises(ManifestSyntax):
            parse_manifest(data)

    def test_missing_header_fields(self):
        with pytest.raises(ManifestSemantic):
            parse_manifest(b'{"title": "No id"}\n{"url": "http://example.org/"}\n')

    def test_missing_seed_url(self):
        data = manifest_bytes("c1", "T", seeds=[{"title": "no url"}])
        with pytest.raises(ManifestSemantic):
            parse_manifest(data)

    def test_zero_seeds_rejected(self):
        with pytest.raises(ManifestSemantic):
            parse_manifest(b'{"collectionId": "c1", "title": "T"}\n')

    def test_not_utf8_rejected(self):
        with pytest.raises(ManifestSyntax):
            parse_manifest(b"\xff\xfe\x00 nope")

    def test_unknown_fields_ignored(self):
        data = manifest_bytes(
            "c1", "T", seeds=[{"url": "http://example.org/", "wat": [1, 2, 3]}]
        )
        manifest = parse_manifest(data)
        assert manifest.seeds[0].url == "http://example.org/"

    def test_inverted_capture_period_rejected(self):
        data = manifest_bytes(
            "c1",
            "T",
            seeds=[
                {
                    "url": "http://example.org/",
                    "firstCapture": "20150731000000",
                    "lastCapture": "20080515000000",
                }
            ],
        )
        with pytest.raises(ManifestSemantic):
            parse_manifest(data)


class TestImportCollection:
    def test_one_seed_import_is_read_only(self, store):
        manifest = parse_manifest(
            manifest_bytes("c1", "Tiny", seeds=[{"url": "http://example.org/"}])
        )
        gid = import_collection(store, manifest, actor="importer")
        group = store.require_group(gid)
        assert group.read_only is True
        assert len(group.resource_ids) == 1
        resource = store.resources_of(gid)[0]
        assert resource.source.kind == SourceKind.ARCHIVE_COLLECTION
        assert resource.source.collection_id == "c1"

    def test_occupy_fixture_carries_collector(self, store, occupy_manifest):
        gid = import_collection(store, parse_manifest(occupy_manifest), actor="importer")
        resources = store.resources_of(gid)
        assert len(resources) == 933
        assert all(
            r.source.collector_name == "Internet Archive Global Events" for r in resources
        )

    def test_duplicate_collection_rejected(self, store):
        manifest = parse_manifest(
            manifest_bytes("c1", "Tiny", seeds=[{"url": "http://example.org/"}])
        )
        import_collection(store, manifest, actor="importer")
        with pytest.raises(DuplicateCollection):
            import_collection(store, manifest, actor="importer")

    def test_subjects_become_normalized_tags(self, store):
        manifest = parse_manifest(
            manifest_bytes(
                "c1", "T", seeds=[{"url": "http://example.org/", "subjects": [" Tibet ", "TIBET", "news"]}]
            )
        )
        gid = import_collection(store, manifest, actor="importer")
        assert store.resources_of(gid)[0].tags == frozenset({"tibet", "news"})

    def test_bad_seed_urls_skipped_and_reported(self, store):
        manifest = parse_manifest(
            manifest_bytes(
                "c1",
                "T",
                seeds=[
                    {"url": "http://good.example.org/"},
                    {"url": "ftp://bad.example.org/"},
                    {"url": "http://good.example.org:80/"},  # dup after normalization
                    {"url": "http://other.example.org/"},
                ],
            )
        )
        rejected = []
        gid = import_collection(
            store, manifest, actor="importer", on_reject=lambda url, why: rejected.append(url)
        )
        group = store.require_group(gid)
        assert len(group.resource_ids) == len(manifest.seeds) - len(rejected)
        assert rejected == ["ftp://bad.example.org/", "http://good.example.org:80/"]

    def test_rollback_on_duplicate_leaves_no_group(self, store):
        manifest = parse_manifest(
            manifest_bytes("c1", "Tiny", seeds=[{"url": "http://example.org/"}])
        )
        import_collection(store, manifest, actor="importer")
        before = set(store.groups)
        with pytest.raises(DuplicateCollection):
            import_collection(store, manifest, actor="importer")
        assert set(store.groups) == before


class TestListCollections:
    def test_empty(self, store):
        assert list_collections(store) == []

    def test_sorted_by_title(self, store):
        for cid, title in [("c2", "Zebra"), ("c1", "Aardvark")]:
            import_collection(
                store,
                parse_manifest(manifest_bytes(cid, title, seeds=[{"url": f"http://{cid}.org/"}])),
                actor="importer",
            )
        titles = [c.title for c in list_collections(store)]
        assert titles == ["Aardvark", "Zebra"]

    def test_counts_and_collector(self, store, hrwa_manifest):
        import_collection(store, parse_manifest(hrwa_manifest), actor="importer")
        (summary,) = list_collections(store)
        assert summary.resource_count == 711
        assert summary.collector_name == "Columbia University Libraries"
