"""Training the feature scorer and ranking candidates with it.

Positive pairs couple a concept set with its own gold sentence; negatives
swap in another entry's sentence. A logistic model over overlap features
then ranks retrieval candidates, replacing raw match counts.
"""

from pathlib import Path

from protoret import (
    ConceptSet,
    FeatureScorer,
    InvertedIndex,
    RankingRetriever,
    ScorerTrainConfig,
    SentenceStore,
    build_pairs,
    exclude_targets,
    ingest_corpus,
    load_commongen,
    matching_retrieve,
    train_scorer,
)

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"

train_entries = load_commongen(FIXTURES / "commongen_train.jsonl")
pairs = build_pairs(train_entries, neg_per_pos=1, seed=11)
print(f"{len(pairs)} training pairs from {len(train_entries)} entries")

model = train_scorer(pairs, ScorerTrainConfig(epochs=150, learning_rate=0.5, seed=11))
trace = model.training_meta["loss_trace"]
print(f"cross-entropy {trace[0]:.4f} -> {trace[-1]:.4f} over {len(trace)} epochs")
print("learned weights:")
for name, w in zip(model.feature_names, model.weights):
    print(f"  {name:22s} {w:+.3f}")

store = SentenceStore()
ingest_corpus(FIXTURES / "external_captions.txt", "captions", store)
ingest_corpus(FIXTURES / "external_activity.txt", "activity", store)
exclude_targets(store, train_entries)
store.seal()
index = InvertedIndex.build(store)

query = ConceptSet.from_words(["girl", "water", "splash", "beach"])
cands = index.candidates(query)
ranked = RankingRetriever(store, FeatureScorer(model)).retrieve(cands, k=3)
matched = matching_retrieve(cands, k=3, seed=0, store=store)

print(f"\nquery {query.concepts}; {len(cands)} candidates")
print("scorer ranking:")
for p in ranked.prototypes:
    print(f"  {p.score:.3f}  {p.text}")
print("matching retriever:")
for p in matched.prototypes:
    print(f"  {int(p.score)} shared  {p.text}")
