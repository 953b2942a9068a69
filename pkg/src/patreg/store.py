"""Keyed indexes over an immutable Dataset.

Every multimap is a CSR layout: sorted unique keys, per-key start/count into
a stable permutation of the relation's rows. Unique maps are the same thing
with all counts equal to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import Dataset, RegisterApplication, Table, encode_country, factorize


class StoreError(ValueError):
    pass


@dataclass(frozen=True)
class KeyIndex:
    keys: np.ndarray     # sorted unique keys
    starts: np.ndarray   # into ``order``
    counts: np.ndarray
    order: np.ndarray    # row positions grouped by key, file order within a key

    @classmethod
    def build(cls, column: np.ndarray) -> KeyIndex:
        col = np.asarray(column, dtype=np.int64)
        order = np.argsort(col, kind="stable")
        sorted_keys = col[order]
        if len(col):
            first = np.ones(len(col), dtype=bool)
            first[1:] = sorted_keys[1:] != sorted_keys[:-1]
            starts = np.flatnonzero(first)
            counts = np.diff(np.append(starts, len(col)))
            keys = sorted_keys[starts]
        else:
            starts = counts = keys = np.empty(0, dtype=np.int64)
        return cls(keys, starts.astype(np.int64), counts.astype(np.int64), order.astype(np.int64))

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def n_rows(self) -> int:
        return len(self.order)

    def positions(self, key: int) -> np.ndarray:
        """Row positions for one key (empty if absent)."""
        slot = kernels.lookup_sorted(self.keys, np.array([key], dtype=np.int64))[0]
        if slot < 0:
            return np.empty(0, dtype=np.int64)
        s = self.starts[slot]
        return self.order[s:s + self.counts[slot]]

    def gather(self, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(owner, row) pairs for all rows matching each query key.

        ``owner`` indexes into ``queries`` and is nondecreasing.
        """
        q = np.asarray(queries, dtype=np.int64)
        slot = kernels.lookup_sorted(self.keys, q)
        hit = slot >= 0
        starts = np.where(hit, self.starts[np.maximum(slot, 0)] if len(self.keys) else 0, 0)
        counts = np.where(hit, self.counts[np.maximum(slot, 0)] if len(self.keys) else 0, 0)
        owner, pos = kernels.expand_segments(starts, counts)
        return owner, self.order[pos]

    def count_of(self, queries: np.ndarray) -> np.ndarray:
        q = np.asarray(queries, dtype=np.int64)
        slot = kernels.lookup_sorted(self.keys, q)
        if len(self.keys) == 0:
            return np.zeros(len(q), dtype=np.int64)
        return np.where(slot >= 0, self.counts[np.maximum(slot, 0)], 0)

    def unique_rows(self, queries: np.ndarray) -> np.ndarray:
        """Row for each query in a unique index, -1 when absent."""
        q = np.asarray(queries, dtype=np.int64)
        slot = kernels.lookup_sorted(self.keys, q)
        if len(self.keys) == 0:
            return np.full(len(q), -1, dtype=np.int64)
        return np.where(slot >= 0, self.order[self.starts[np.maximum(slot, 0)]], -1)


def _unique_index(table: Table, column: np.ndarray, what: str) -> KeyIndex:
    idx = KeyIndex.build(column)
    if len(idx) and idx.counts.max() > 1:
        dup = idx.keys[np.argmax(idx.counts > 1)]
        raise StoreError(f"{table.schema.name}: duplicate {what} {dup}")
    return idx


@dataclass(frozen=True)
class IndexedStore:
    dataset: Dataset
    by_id: KeyIndex                 # reg101 id -> row
    by_appln_id: KeyIndex           # reg101 appln_id (> 0 only) -> row
    core_by_appln: KeyIndex         # tls201 appln_id -> row
    core_pubs_by_appln: KeyIndex    # tls211 appln_id -> rows
    citations_by_publn: KeyIndex    # tls212 pat_publn_id -> rows
    publications_by_id: KeyIndex
    parties_by_id: KeyIndex
    events_by_id: KeyIndex
    steps_by_id: KeyIndex
    licensees_by_id: KeyIndex
    licensee_states_by_id: KeyIndex
    designated_by_id: KeyIndex
    legal_by_appln: KeyIndex
    ipc_by_prefix: dict[str, np.ndarray]   # 4-char prefix -> tls209 row positions
    # derived columns
    event_code_ids: np.ndarray
    event_codes: list[str]
    licensee_country_keys: np.ndarray
    legal_country_keys: np.ndarray

    def register_for_core(self, appln_id: int) -> RegisterApplication | None:
        return register_for_core(self, appln_id)


def _prefix_index(ipc: Table) -> dict[str, np.ndarray]:
    symbols = ipc["ipc_class_symbol"]
    if len(symbols) == 0:
        return {}
    codes, uniques = factorize(np.array([s[:4] for s in symbols.tolist()], dtype=object))
    order = np.argsort(codes, kind="stable")
    bounds = np.searchsorted(codes[order], np.arange(len(uniques) + 1))
    return {p: order[bounds[k]:bounds[k + 1]] for k, p in enumerate(uniques)}


def build_store(dataset: Dataset) -> IndexedStore:
    d = dataset
    apps = d.applications
    linked = np.flatnonzero(apps["appln_id"] > 0)
    by_appln_raw = KeyIndex.build(apps["appln_id"][linked])
    if len(by_appln_raw) and by_appln_raw.counts.max() > 1:
        dup = by_appln_raw.keys[np.argmax(by_appln_raw.counts > 1)]
        raise StoreError(f"reg101_appln: duplicate appln_id {dup}")
    by_appln = KeyIndex(by_appln_raw.keys, by_appln_raw.starts, by_appln_raw.counts, linked[by_appln_raw.order])
    event_ids, event_codes = factorize(d.events["event_code"])
    return IndexedStore(
        dataset=d,
        by_id=_unique_index(apps, apps["id"], "id"),
        by_appln_id=by_appln,
        core_by_appln=_unique_index(d.core_applications, d.core_applications["appln_id"], "appln_id"),
        core_pubs_by_appln=KeyIndex.build(d.core_publications["appln_id"]),
        citations_by_publn=KeyIndex.build(d.citations["pat_publn_id"]),
        publications_by_id=KeyIndex.build(d.publications["id"]),
        parties_by_id=KeyIndex.build(d.parties["id"]),
        events_by_id=KeyIndex.build(d.events["id"]),
        steps_by_id=KeyIndex.build(d.proc_steps["id"]),
        licensees_by_id=KeyIndex.build(d.licensees["id"]),
        licensee_states_by_id=KeyIndex.build(d.licensee_states["id"]),
        designated_by_id=KeyIndex.build(d.designated_states["id"]),
        legal_by_appln=KeyIndex.build(d.legal_status["appln_id"]),
        ipc_by_prefix=_prefix_index(d.ipc),
        event_code_ids=event_ids,
        event_codes=event_codes,
        licensee_country_keys=encode_country(d.licensee_states["licensee_country"]),
        legal_country_keys=encode_country(d.legal_status["country"]),
    )


def register_for_core(store: IndexedStore, appln_id: int) -> RegisterApplication | None:
    """The Register row linked to a core application, or None."""
    if appln_id <= 0:
        raise ValueError("appln_id must be positive; 0 marks applications with no core record")
    pos = store.by_appln_id.positions(appln_id)
    if len(pos) == 0:
        return None
    return next(store.dataset.applications.take(pos).rows())
