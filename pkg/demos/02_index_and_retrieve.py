"""Candidate construction and matching retrieval over the fixture corpus.

Builds a sentence store from the bundled fixtures, excludes benchmark
targets, indexes the rest, and pulls prototypes for a query concept set.
"""

from pathlib import Path

from protoret import (
    ConceptSet,
    InvertedIndex,
    SentenceStore,
    exclude_targets,
    ingest_corpus,
    load_commongen,
    matching_retrieve,
)

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"

store = SentenceStore()
for name in ("external_captions.txt", "external_activity.txt"):
    n = ingest_corpus(FIXTURES / name, name.split("_")[1].split(".")[0], store)
    print(f"ingested {n:4d} sentences from {name}")

entries = []
for split in ("train", "dev", "test"):
    entries.extend(load_commongen(FIXTURES / f"commongen_{split}.jsonl"))
removed = exclude_targets(store, entries)
store.seal()
print(f"excluded {removed} sentences that duplicate benchmark targets")

index = InvertedIndex.build(store)
print(f"indexed {index.doc_count} sentences over {len(index.postings)} lemmas")

query = ConceptSet.from_words(["dog", "ball", "park", "catch"])
cands = index.candidates(query, min_overlap=2)
print(f"\nquery {query.concepts}: {len(cands)} candidates share >= 2 concepts")

protos = matching_retrieve(cands, k=3, seed=7, store=store)
print("top prototypes by shared-concept count:")
for p in protos.prototypes:
    print(f"  [{int(p.score)} shared] {p.text}")
