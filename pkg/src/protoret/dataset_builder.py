"""Construction of pre-training and fine-tuning sequence pairs.

Pre-training examples come from pool sentences: content-word lemmas
(filtered to a concept vocabulary) act as the input concept set, the
sentence itself is the target, and prototypes are matching-retrieved from
the rest of the pool. Concept sets colliding with held-out test sets are
dropped. Fine-tuning examples pair benchmark concept sets with their gold
targets plus scorer-retrieved prototypes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .concept_index import InvertedIndex
from .corpus import ConceptSet, SentenceRecord, SentenceStore
from .errors import DataError
from .retrieval import MATCHING, PrototypeList, matching_retrieve
from .textnorm import Pos

SEP = "<sep>"


class ConceptVocabulary:
    """Lowercase single-token lemmas that may serve as pseudo concepts."""

    def __init__(self, lemmas):
        self.lemmas = frozenset(lemmas)
        for lemma in self.lemmas:
            if not lemma or lemma != lemma.lower() or " " in lemma:
                raise DataError(f"invalid vocabulary entry {lemma!r}")

    @classmethod
    def from_file(cls, path) -> "ConceptVocabulary":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read vocabulary file {path}: {exc}") from exc
        return cls(w.strip() for w in text.splitlines() if w.strip())

    def __contains__(self, lemma):
        return lemma in self.lemmas

    def __len__(self):
        return len(self.lemmas)


@dataclass
class Seq2SeqExample:
    source_text: str
    target_text: str
    concept_set: ConceptSet
    prototype_ids: list[int]
    origin: str  # PRETRAIN | FINETUNE

    def to_json(self) -> dict:
        return {
            "source": self.source_text,
            "target": self.target_text,
            "concepts": list(self.concept_set.concepts),
            "prototype_ids": self.prototype_ids,
            "origin": self.origin,
        }


@dataclass
class BuildStats:
    emitted: int = 0
    skipped_size: int = 0
    skipped_leakage: int = 0
    skipped_no_concepts: int = 0
    empty_prototypes: int = 0
    fallback_used: bool = False
    prototype_sources: dict = field(default_factory=dict)

    def count_prototypes(self, protos: PrototypeList, store: SentenceStore):
        for sid in protos.ids():
            src = store.get(sid).source
            self.prototype_sources[src] = self.prototype_sources.get(src, 0) + 1

    def to_json(self) -> dict:
        return {
            "emitted": self.emitted,
            "skipped_size": self.skipped_size,
            "skipped_leakage": self.skipped_leakage,
            "skipped_no_concepts": self.skipped_no_concepts,
            "empty_prototypes": self.empty_prototypes,
            "fallback_used": self.fallback_used,
            "prototype_sources": dict(sorted(self.prototype_sources.items())),
        }


def extract_pseudo_concepts(record: SentenceRecord, vocab: ConceptVocabulary) -> ConceptSet | None:
    """Distinct noun/proper-noun/verb lemmas kept by the vocabulary.

    First-occurrence order; None when the sentence yields no concepts.
    """
    seen: dict[str, None] = {}
    for token in record.tokens:
        if token.pos in (Pos.NOUN, Pos.PROPN, Pos.VERB) and token.lemma in vocab:
            seen.setdefault(token.lemma)
    if not seen:
        return None
    return ConceptSet(tuple(seen))


def leakage_filter(pseudo: ConceptSet, test_sets, mode: str = "exact") -> bool:
    """True = keep, False = drop.

    `exact` drops only when the unordered concept sets coincide; `subset`
    additionally drops when a test set is wholly contained in the pseudo
    set (a pre-training input that embeds a full test task).
    """
    pseudo_key = frozenset(pseudo.concepts)
    if mode == "exact":
        return pseudo_key not in test_sets
    if mode == "subset":
        return not any(t <= pseudo_key for t in test_sets)
    raise DataError(f"unknown leakage mode {mode!r}")


def concept_set_keys(entries) -> frozenset[frozenset[str]]:
    return frozenset(frozenset(e.concept_set.concepts) for e in entries)


def build_pretrain(pool_ids, vocab: ConceptVocabulary, test_sets, index: InvertedIndex,
                   store: SentenceStore, k: int = 3, min_concepts: int = 3, max_concepts: int = 7,
                   seed: int = 0, min_overlap: int = 2, leakage_mode: str = "exact",
                   stats: BuildStats | None = None):
    """Yield pre-training examples for each pool sentence, in pool order.

    The source sentence never appears among its own prototypes. Skips
    (size bounds, leakage) are tallied in `stats`, not raised.
    """
    stats = stats if stats is not None else BuildStats()
    for sid in pool_ids:
        record = store.get(sid)
        pseudo = extract_pseudo_concepts(record, vocab)
        if pseudo is None:
            stats.skipped_no_concepts += 1
            continue
        if not (min_concepts <= pseudo.n <= max_concepts):
            stats.skipped_size += 1
            continue
        if not leakage_filter(pseudo, test_sets, leakage_mode):
            stats.skipped_leakage += 1
            continue
        cands = index.candidates(pseudo, min_overlap=min_overlap)
        cands.entries = [(cid, c) for cid, c in cands.entries if cid != sid]
        protos = matching_retrieve(cands, k, _per_record_seed(seed, sid), store)
        if not protos.prototypes:
            stats.empty_prototypes += 1
        stats.count_prototypes(protos, store)
        stats.emitted += 1
        yield Seq2SeqExample(
            source_text=serialize_source(pseudo, protos),
            target_text=record.text,
            concept_set=pseudo,
            prototype_ids=protos.ids(),
            origin="PRETRAIN",
        )


def _per_record_seed(seed: int, record_id: int) -> int:
    rng = random.Random(f"{seed}:{record_id}")
    return rng.getrandbits(63)


def build_finetune(entries, retriever, index: InvertedIndex, store: SentenceStore,
                   k: int = 3, min_overlap: int = 2, stats: BuildStats | None = None):
    """Yield fine-tuning examples: one per (concept set, target).

    Prototypes are retrieved once per concept set and shared across its
    targets. Entries without targets (held-out test input) produce a
    single source-only example.
    """
    stats = stats if stats is not None else BuildStats()
    for entry in entries:
        cands = index.candidates(entry.concept_set, min_overlap=min_overlap)
        protos = retriever.retrieve(cands, k)
        if not protos.prototypes:
            stats.empty_prototypes += 1
        stats.count_prototypes(protos, store)
        source = serialize_source(entry.concept_set, protos)
        targets = entry.targets if entry.targets else [""]
        for target in targets:
            stats.emitted += 1
            yield Seq2SeqExample(
                source_text=source,
                target_text=target,
                concept_set=entry.concept_set,
                prototype_ids=protos.ids(),
                origin="FINETUNE",
            )


def serialize_source(concepts: ConceptSet, prototypes: PrototypeList | None) -> str:
    """Concepts space-joined, then one `<sep>`-prefixed segment per prototype."""
    pieces = list(concepts.concepts)
    texts = prototypes.texts() if prototypes is not None else []
    for piece in pieces + texts:
        if SEP in piece:
            raise DataError(f"input contains the reserved delimiter {SEP!r}: {piece!r}")
    out = " ".join(pieces)
    for text in texts:
        out += f" {SEP} {text}"
    return out


def parse_source(source: str) -> tuple[list[str], list[str]]:
    """Inverse of serialize_source: (concept list, prototype texts)."""
    segments = source.split(f" {SEP} ")
    head = segments[0]
    if SEP in head:
        raise DataError(f"malformed source text {source!r}")
    return head.split(" ") if head else [], segments[1:]


def write_examples(examples, path) -> int:
    """Write examples as JSONL; returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(ex.to_json(), sort_keys=True) + "\n")
            n += 1
    return n


def read_examples(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)
