"""Sentence store: corpus ingestion, target exclusion, pool sampling.

Records live in memory and persist as a directory with `records.jsonl`
plus `meta.json`. Excluded records stay in the store (marked) so the
leakage filter is auditable; they never become retrieval candidates.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ConfigError, DataError
from .textnorm import LemmaLexicon, Pos, Token, default_lexicon, lemmatize, normalize_text, tag, tokenize, tokenize_cased


class Split(str, Enum):
    EXTERNAL = "EXTERNAL"
    CG_TRAIN = "CG_TRAIN"
    CG_DEV = "CG_DEV"
    CG_TEST = "CG_TEST"


@dataclass(frozen=True)
class ConceptSet:
    """Ordered, distinct, pre-lemmatized concept words."""

    concepts: tuple[str, ...]

    def __post_init__(self):
        if not self.concepts:
            raise DataError("concept set must contain at least one concept")
        if len(set(self.concepts)) != len(self.concepts):
            raise DataError(f"concepts not distinct: {self.concepts}")

    @classmethod
    def from_words(cls, words, lexicon: LemmaLexicon | None = None) -> "ConceptSet":
        """Lemmatize raw words, dropping duplicates but keeping first-seen order."""
        lexicon = lexicon or default_lexicon()
        seen: dict[str, None] = {}
        for w in words:
            seen.setdefault(lemmatize(w.strip().lower(), lexicon))
        return cls(tuple(seen))

    @property
    def n(self) -> int:
        return len(self.concepts)

    def key(self) -> tuple[str, ...]:
        """Order-insensitive identity, e.g. for alignment and caching."""
        return tuple(sorted(self.concepts))


@dataclass(frozen=True)
class SentenceRecord:
    id: int
    text: str
    tokens: tuple[Token, ...]
    source: str
    split: Split
    excluded: bool = False
    lemma_set: frozenset[str] = field(init=False)

    def __post_init__(self):
        if not self.text:
            raise DataError("sentence record text must be non-empty")
        object.__setattr__(self, "lemma_set", frozenset(t.lemma for t in self.tokens))


@dataclass
class CommonGenEntry:
    concept_set: ConceptSet
    targets: list[str]


class SentenceStore:
    """Append-only sentence collection; seal before indexing or sampling."""

    def __init__(self):
        self._records: list[SentenceRecord] = []
        self._by_id: dict[int, SentenceRecord] = {}
        self._texts_by_source: dict[str, set[str]] = {}
        self._next_id = 0
        self.sealed = False
        self.seeds: dict[str, list] = {}

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def get(self, record_id: int) -> SentenceRecord:
        try:
            return self._by_id[record_id]
        except KeyError:
            raise DataError(f"no record with id {record_id}") from None

    def add(self, text, tokens, source, split) -> SentenceRecord | None:
        """Add one sentence; returns None when it is a duplicate within `source`."""
        if self.sealed:
            raise ConfigError("store is sealed; no further ingestion allowed")
        seen = self._texts_by_source.setdefault(source, set())
        if text in seen:
            return None
        seen.add(text)
        rec = SentenceRecord(id=self._next_id, text=text, tokens=tuple(tokens), source=source, split=split)
        self._next_id += 1
        self._records.append(rec)
        self._by_id[rec.id] = rec
        return rec

    def seal(self):
        self.sealed = True

    def mark_excluded(self, record_id: int):
        rec = self._by_id[record_id]
        if not rec.excluded:
            new = SentenceRecord(
                id=rec.id, text=rec.text, tokens=rec.tokens, source=rec.source, split=rec.split, excluded=True
            )
            idx = self._records.index(rec)
            self._records[idx] = new
            self._by_id[rec.id] = new

    def candidate_records(self):
        """Records eligible as retrieval candidates: EXTERNAL and not excluded."""
        return [r for r in self._records if r.split is Split.EXTERNAL and not r.excluded]

    def counts(self) -> dict:
        by_source: dict[str, int] = {}
        by_split: dict[str, int] = {}
        excluded = 0
        for r in self._records:
            by_source[r.source] = by_source.get(r.source, 0) + 1
            by_split[r.split.value] = by_split.get(r.split.value, 0) + 1
            excluded += int(r.excluded)
        return {"total": len(self._records), "by_source": by_source, "by_split": by_split, "excluded": excluded}

    def record_seed(self, operation: str, **params):
        history = self.seeds.setdefault(operation, [])
        if params not in history:
            history.append(params)

    # ---- persistence ----------------------------------------------------

    def save(self, directory):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / "records.jsonl", "w", encoding="utf-8") as fh:
            for r in self._records:
                row = {
                    "id": r.id,
                    "text": r.text,
                    "lemmas": [t.lemma for t in r.tokens],
                    "pos": [t.pos.value for t in r.tokens],
                    "source": r.source,
                    "split": r.split.value,
                    "excluded": r.excluded,
                }
                surfaces = [t.surface for t in r.tokens]
                if surfaces != tokenize(r.text):
                    row["surfaces"] = surfaces
                fh.write(json.dumps(row, sort_keys=True) + "\n")
        meta = {"sealed": self.sealed, "next_id": self._next_id, "counts": self.counts(), "seeds": self.seeds}
        (directory / "meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, directory) -> "SentenceStore":
        directory = Path(directory)
        records_path = directory / "records.jsonl"
        if not records_path.exists():
            raise DataError(f"no sentence store at {directory}")
        store = cls()
        with open(records_path, encoding="utf-8") as fh:
            for line in fh:
                row = json.loads(line)
                surfaces = row.get("surfaces") or tokenize(row["text"])
                if not (len(surfaces) == len(row["lemmas"]) == len(row["pos"])):
                    raise DataError(f"corrupt record {row['id']} in {records_path}")
                tokens = tuple(
                    Token(surface=s, lemma=l, pos=Pos(p), index=i)
                    for i, (s, l, p) in enumerate(zip(surfaces, row["lemmas"], row["pos"]))
                )
                rec = SentenceRecord(
                    id=row["id"],
                    text=row["text"],
                    tokens=tokens,
                    source=row["source"],
                    split=Split(row["split"]),
                    excluded=row["excluded"],
                )
                store._records.append(rec)
                store._by_id[rec.id] = rec
                store._texts_by_source.setdefault(rec.source, set()).add(rec.text)
        meta_path = directory / "meta.json"
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())
            store.sealed = meta.get("sealed", False)
            store._next_id = meta.get("next_id", len(store._records))
            store.seeds = meta.get("seeds", {})
        else:
            store._next_id = max((r.id for r in store._records), default=-1) + 1
        return store

    def checksum(self) -> str:
        """Content hash over the persisted record stream (order-sensitive)."""
        h = hashlib.sha256()
        for r in self._records:
            h.update(f"{r.id}\x1f{r.text}\x1f{r.source}\x1f{r.split.value}\x1f{int(r.excluded)}\n".encode())
        return h.hexdigest()


# ---- ingestion -----------------------------------------------------------


def ingest_corpus(path, source, store: SentenceStore, split=Split.EXTERNAL, fmt="text",
                  lexicon: LemmaLexicon | None = None) -> int:
    """Ingest one sentence-per-line (or pre-tagged) file into the store.

    Returns the number of records added; exact duplicate texts within the
    same source are dropped.
    """
    lexicon = lexicon or default_lexicon()
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read corpus file {path}: {exc}") from exc

    added = 0
    if fmt == "text":
        for line in raw.splitlines():
            text = line.strip()
            if not text:
                continue
            tokens = tag(tokenize(text), lexicon, cased=tokenize_cased(text))
            if store.add(text, tokens, source, split) is not None:
                added += 1
    elif fmt == "tagged":
        added = _ingest_tagged(raw, path, source, store, split)
    else:
        raise ConfigError(f"unknown corpus format {fmt!r}")
    return added


def _ingest_tagged(raw, path, source, store, split) -> int:
    """Tab-separated surface/lemma/pos triples, blank line between sentences."""
    added = 0
    block: list[tuple[str, str, str]] = []

    def flush():
        nonlocal added
        if not block:
            return
        tokens = tuple(
            Token(surface=s, lemma=l, pos=Pos(p), index=i) for i, (s, l, p) in enumerate(block)
        )
        text = " ".join(s for s, _, _ in block)
        if store.add(text, tokens, source, split) is not None:
            added += 1
        block.clear()

    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            flush()
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3 or not all(parts):
            raise DataError(f"{path}:{lineno}: malformed pre-tagged line (expected surface\\tlemma\\tpos)")
        surface, lemma, pos = parts
        surface = surface.lower()
        if tokenize(surface) != [surface]:
            raise DataError(f"{path}:{lineno}: pre-tagged token {surface!r} is not tokenizer-atomic")
        try:
            Pos(pos)
        except ValueError:
            raise DataError(f"{path}:{lineno}: unknown pos tag {pos!r}") from None
        block.append((surface, lemma.lower(), pos))
    flush()
    return added


def load_commongen(path, lexicon: LemmaLexicon | None = None) -> list[CommonGenEntry]:
    """Load entries from the JSONL schema {"concepts": [...], "targets": [...]}."""
    lexicon = lexicon or default_lexicon()
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    entries = []
    for i, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: record {i}: invalid JSON: {exc}") from exc
        if "concepts" not in row:
            raise DataError(f"{path}: record {i}: missing 'concepts' field")
        targets = [t for t in row.get("targets", []) if t]
        entries.append(CommonGenEntry(ConceptSet.from_words(row["concepts"], lexicon), targets))
    return entries


def exclude_targets(store: SentenceStore, entries) -> int:
    """Mark every EXTERNAL record whose normalized text equals a target.

    Counts marks per record, so the same target duplicated under two
    sources removes two records.
    """
    target_norms = {normalize_text(t) for e in entries for t in e.targets}
    removed = 0
    for rec in list(store):
        if rec.split is Split.EXTERNAL and not rec.excluded and normalize_text(rec.text) in target_norms:
            store.mark_excluded(rec.id)
            removed += 1
    return removed


def sample_pool(store: SentenceStore, size: int, seed: int) -> list[int]:
    """Uniform sample (without replacement) of candidate-eligible record ids."""
    available = sorted(r.id for r in store.candidate_records())
    if size > len(available):
        raise DataError(f"requested pool of {size} but only {len(available)} candidate sentences available")
    if size < 0:
        raise ConfigError("pool size must be non-negative")
    rng = random.Random(seed)
    return sorted(rng.sample(available, size))
