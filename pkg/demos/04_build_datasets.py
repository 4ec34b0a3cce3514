"""Dataset construction: pre-training and fine-tuning JSONL.

Pre-training inputs are pseudo concept sets pulled from pool sentences
(content lemmas kept by the concept vocabulary), leakage-filtered against
the test split, and paired with matching-retrieved prototypes. The
sentence itself is the generation target.
"""

import itertools
from pathlib import Path

from protoret import (
    ConceptVocabulary,
    InvertedIndex,
    MatchingRetriever,
    SentenceStore,
    build_finetune,
    build_pretrain,
    exclude_targets,
    ingest_corpus,
    load_commongen,
    sample_pool,
)
from protoret.dataset_builder import BuildStats, concept_set_keys

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"

store = SentenceStore()
ingest_corpus(FIXTURES / "external_captions.txt", "captions", store)
ingest_corpus(FIXTURES / "external_activity.txt", "activity", store)
splits = {s: load_commongen(FIXTURES / f"commongen_{s}.jsonl") for s in ("train", "dev", "test")}
exclude_targets(store, list(itertools.chain.from_iterable(splits.values())))
store.seal()

index = InvertedIndex.build(store)
vocab = ConceptVocabulary.from_file(FIXTURES / "concept_vocab.txt")
pool = sample_pool(store, 600, seed=3)
test_keys = concept_set_keys(splits["test"])

stats = BuildStats()
examples = list(build_pretrain(pool, vocab, test_keys, index, store, k=3, seed=3, stats=stats))
print(f"pre-training: {stats.emitted} examples from a pool of {len(pool)}")
print(f"  skipped: {stats.skipped_size} size, {stats.skipped_leakage} leakage, "
      f"{stats.skipped_no_concepts} empty")
print(f"  prototype provenance: {stats.prototype_sources}")
print("\nsample pre-training example:")
print(f"  source: {examples[0].source_text}")
print(f"  target: {examples[0].target_text}")

ft = list(build_finetune(splits["train"][:5], MatchingRetriever(store, seed=3), index, store, k=3))
print(f"\nfine-tuning (first 5 entries): {len(ft)} examples")
print(f"  source: {ft[0].source_text}")
print(f"  target: {ft[0].target_text}")
