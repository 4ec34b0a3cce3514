"""Inverted index from lemma to sentence ids.

Backs candidate-set construction: all sentences sharing at least
`min_overlap` concepts with a query. Query cost is linear in the total
length of the touched posting lists, which is what makes half-million
sentence pools workable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import ConceptSet, SentenceRecord, SentenceStore
from .errors import ConfigError, DataError


@dataclass
class CandidateSet:
    concept_set: ConceptSet
    entries: list[tuple[int, int]]  # (sentence id, match_count), id-ascending

    def __len__(self):
        return len(self.entries)

    def ids(self) -> list[int]:
        return [sid for sid, _ in self.entries]


class InvertedIndex:
    def __init__(self, postings: dict[str, list[int]], doc_count: int, store_checksum: str | None = None):
        self.postings = postings
        self.doc_count = doc_count
        self.store_checksum = store_checksum

    @classmethod
    def build(cls, store: SentenceStore) -> "InvertedIndex":
        """Index the lemma sets of all candidate-eligible records."""
        if not store.sealed:
            raise ConfigError("cannot build an index over an unsealed store")
        postings: dict[str, list[int]] = {}
        count = 0
        for rec in store.candidate_records():
            count += 1
            for lemma in rec.lemma_set:
                postings.setdefault(lemma, []).append(rec.id)
        for lst in postings.values():
            lst.sort()
        return cls(postings, count, store.checksum())

    def candidates(self, concepts: ConceptSet, min_overlap: int = 2) -> CandidateSet:
        """All indexed sentences containing at least min_overlap query concepts."""
        if min_overlap < 1:
            raise ConfigError("min_overlap must be >= 1")
        counts: dict[int, int] = {}
        for lemma in set(concepts.concepts):
            for sid in self.postings.get(lemma, ()):
                counts[sid] = counts.get(sid, 0) + 1
        entries = sorted((sid, c) for sid, c in counts.items() if c >= min_overlap)
        return CandidateSet(concept_set=concepts, entries=entries)

    # ---- persistence ------------------------------------------------------

    def save(self, path):
        payload = {
            "doc_count": self.doc_count,
            "store_checksum": self.store_checksum,
            "postings": self.postings,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "InvertedIndex":
        path = Path(path)
        try:
            payload = json.loads(path.read_text())
        except OSError as exc:
            raise DataError(f"cannot read index file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DataError(f"corrupt index file {path}: {exc}") from exc
        return cls(payload["postings"], payload["doc_count"], payload.get("store_checksum"))


def match_count(record: SentenceRecord, concepts: ConceptSet) -> int:
    """Number of distinct concepts whose lemma occurs in the record."""
    return sum(1 for c in set(concepts.concepts) if c in record.lemma_set)
