"""File-backed persistence: append-only event log plus compacted snapshots.

Each acknowledged mutation is one JSON line in ``events.log``, flushed
and fsynced before the caller sees success.  ``snapshot.json`` holds a
periodic compaction; records carry sequence numbers so replaying an
event that the snapshot already covers is a no-op.

Recovery rules: a torn final line (a crash mid-append of a never
acknowledged write) is dropped with a warning; anything malformed
earlier in the file refuses startup with :class:`CorruptState`, naming
the offending record.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Optional

from .curation import (
    SCHEMA_VERSION,
    CurationStore,
    event_from_record,
    event_to_record,
    group_from_record,
    group_to_record,
)
from .captures import receipt_from_record, receipt_to_record
from .domain import resource_from_record, resource_to_record
from .errors import CorruptState, StorageFailure

logger = logging.getLogger(__name__)

SNAPSHOT_FILE = "snapshot.json"
EVENTS_FILE = "events.log"


def store_to_snapshot(store: CurationStore, last_seq: int) -> dict[str, Any]:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "lastSeq": last_seq,
        "groups": {gid: group_to_record(g) for gid, g in store.groups.items()},
        "resources": {
            rid: {"record": resource_to_record(r), "home": store.resource_home[rid]}
            for rid, r in store.resources.items()
        },
        "activity": {
            gid: [event_to_record(e) for e in events] for gid, events in store.activity.items()
        },
        "receipts": {rid: receipt_to_record(r) for rid, r in store.receipts.items()},
        "annotations": {key: ann.to_record() for key, ann in store.annotations.items()},
        "collections": dict(store.collections),
    }


def restore_from_snapshot(store: CurationStore, snapshot: dict[str, Any]) -> int:
    from .enrichment import CrawlAnnotation

    version = snapshot.get("schemaVersion")
    if version != SCHEMA_VERSION:
        raise CorruptState(f"snapshot schemaVersion {version!r}, expected {SCHEMA_VERSION}")
    try:
        store.groups.update({gid: group_from_record(rec) for gid, rec in snapshot["groups"].items()})
        for rid, entry in snapshot["resources"].items():
            store.resources[rid] = resource_from_record(entry["record"])
            store.resource_home[rid] = entry["home"]
        for gid, events in snapshot["activity"].items():
            store.activity[gid] = [event_from_record(e) for e in events]
        store.receipts.update(
            {rid: receipt_from_record(rec) for rid, rec in snapshot["receipts"].items()}
        )
        store.annotations.update(
            {key: CrawlAnnotation.from_record(rec) for key, rec in snapshot["annotations"].items()}
        )
        store.collections.update(snapshot["collections"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptState(f"snapshot record invalid: {exc}") from exc
    return snapshot["lastSeq"]


class EventLog:
    """Write-ahead log with periodic compaction into a snapshot."""

    def __init__(self, data_dir: Path | str, fsync: bool = True, compact_every: int = 1000):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.snapshot_path = self.data_dir / SNAPSHOT_FILE
        self.events_path = self.data_dir / EVENTS_FILE
        self.fsync = fsync
        self.compact_every = compact_every
        self._seq = 0
        self._events_since_snapshot = 0
        self._handle = None

    # -- recovery -------------------------------------------------------------

    def load(self, store: CurationStore) -> None:
        """Restore state from snapshot plus newer log records."""
        last_snapshot_seq = 0
        if self.snapshot_path.exists():
            try:
                snapshot = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise CorruptState(f"{SNAPSHOT_FILE}: {exc}") from exc
            last_snapshot_seq = restore_from_snapshot(store, snapshot)
        self._seq = last_snapshot_seq
        if self.events_path.exists():
            self._replay(store, last_snapshot_seq)
        self._events_since_snapshot = 0

    def _replay(self, store: CurationStore, skip_through: int) -> None:
        raw = self.events_path.read_bytes()
        if not raw:
            return
        lines = raw.decode("utf-8", errors="replace").split("\n")
        ends_with_newline = raw.endswith(b"\n")
        if ends_with_newline:
            lines = lines[:-1]
        for i, line in enumerate(lines):
            lineno = i + 1
            is_last = i == len(lines) - 1
            try:
                record = json.loads(line)
                seq = record["seq"]
                changes = record["changes"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                if is_last:
                    # torn tail: a crash mid-append of an unacknowledged write
                    logger.warning("%s: dropping torn final record at line %d", EVENTS_FILE, lineno)
                    return
                raise CorruptState(f"{EVENTS_FILE} line {lineno}: {exc}") from exc
            if not isinstance(seq, int) or seq <= 0:
                raise CorruptState(f"{EVENTS_FILE} line {lineno}: bad sequence {seq!r}")
            if seq <= skip_through:
                continue
            if seq != self._seq + 1:
                raise CorruptState(
                    f"{EVENTS_FILE} line {lineno}: sequence {seq}, expected {self._seq + 1}"
                )
            try:
                store.apply_changes(changes)
            except Exception as exc:
                raise CorruptState(f"{EVENTS_FILE} line {lineno}: unreplayable record: {exc}") from exc
            self._seq = seq

    # -- writing ----------------------------------------------------------------

    def _file(self):
        if self._handle is None or self._handle.closed:
            self._handle = open(self.events_path, "a", encoding="utf-8")
        return self._handle

    def append(self, changes: dict[str, Any]) -> int:
        """Durably append one mutation; returns its sequence number.

        Raises :class:`StorageFailure` without advancing the sequence,
        so the caller can roll back its in-memory state.
        """
        seq = self._seq + 1
        line = json.dumps({"seq": seq, "changes": changes}, sort_keys=True, separators=(",", ":"))
        try:
            handle = self._file()
            handle.write(line + "\n")
            handle.flush()
            if self.fsync:
                os.fsync(handle.fileno())
        except OSError as exc:
            self._close()
            raise StorageFailure(f"event log append failed: {exc}") from exc
        self._seq = seq
        self._events_since_snapshot += 1
        return seq

    def _close(self) -> None:
        if self._handle is not None:
            try:
                self._handle.close()
            except OSError:
                pass
            self._handle = None

    def save_snapshot(self, store: CurationStore) -> None:
        """Compact: write the full state, then reset the log."""
        snapshot = store_to_snapshot(store, self._seq)
        tmp_path = self.snapshot_path.with_suffix(".json.tmp")
        try:
            with open(tmp_path, "w", encoding="utf-8") as handle:
                json.dump(snapshot, handle, sort_keys=True, separators=(",", ":"))
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_path, self.snapshot_path)
            # A crash before the truncate is safe: replay skips seq <= lastSeq.
            self._close()
            with open(self.events_path, "w", encoding="utf-8") as handle:
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailure(f"snapshot write failed: {exc}") from exc
        self._events_since_snapshot = 0

    def maybe_compact(self, store: CurationStore) -> None:
        if self._events_since_snapshot >= self.compact_every:
            self.save_snapshot(store)

    @property
    def seq(self) -> int:
        return self._seq
