"""Cross-encoder scorer: concepts and candidate sentence in one sequence,
sigmoid relevance out. Trained with binary cross-entropy on the pipeline's
positive/negative pairs.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import torch
from torch import nn

from .config import TinyModelConfig
from .data import AdapterDataError, load_pairs
from .models import CrossEncoderScorer
from .vocab import Vocab


def encode_pair(vocab: Vocab, concepts, sentence: str, max_len: int):
    """[cls] concepts [sep] sentence [sep], with segment ids 0/1."""
    concept_ids = vocab.encode(" ".join(concepts))
    sent_budget = max_len - len(concept_ids) - 3
    sent_ids = vocab.encode(sentence)[: max(1, sent_budget)]
    ids = [vocab.cls] + concept_ids + [vocab.sep] + sent_ids + [vocab.sep]
    segments = [0] * (len(concept_ids) + 2) + [1] * (len(sent_ids) + 1)
    return ids[:max_len], segments[:max_len]


def _batch(pairs, vocab, max_len, pad_id):
    encoded = [encode_pair(vocab, p["concepts"], p["sentence"], max_len) for p in pairs]
    width = max(len(ids) for ids, _ in encoded)
    ids = torch.full((len(encoded), width), pad_id, dtype=torch.long)
    segs = torch.zeros((len(encoded), width), dtype=torch.long)
    for i, (row_ids, row_segs) in enumerate(encoded):
        ids[i, : len(row_ids)] = torch.tensor(row_ids)
        segs[i, : len(row_segs)] = torch.tensor(row_segs)
    return ids, segs


def rank_auc(pos, neg) -> float:
    wins = 0.0
    for p in pos:
        for n in neg:
            wins += 1.0 if p > n else 0.5 if p == n else 0.0
    return wins / (len(pos) * len(neg)) if pos and neg else 0.0


def train_neural_scorer(pairs_path, output_dir, epochs: int = 3, learning_rate: float = 3e-4,
                        batch_size: int = 32, seed: int = 0, weight_decay: float = 0.01,
                        adam_epsilon: float = 1e-6, holdout_fraction: float = 0.15,
                        model_cfg: TinyModelConfig | None = None) -> dict:
    """Train the cross-encoder; returns {"losses": [...], "holdout_auc": x}."""
    model_cfg = model_cfg or TinyModelConfig()
    pairs = load_pairs(pairs_path)
    torch.manual_seed(seed)
    rng = random.Random(seed)
    rng.shuffle(pairs)
    n_holdout = max(2, int(len(pairs) * holdout_fraction))
    holdout, train = pairs[:n_holdout], pairs[n_holdout:]
    if not {p["label"] for p in train} == {0, 1}:
        raise AdapterDataError("training split lost a label class; provide more pairs")

    vocab = Vocab.build([" ".join(p["concepts"]) for p in pairs] + [p["sentence"] for p in pairs])
    model = CrossEncoderScorer(len(vocab), model_cfg, pad_id=vocab.pad)
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=learning_rate, weight_decay=weight_decay, eps=adam_epsilon
    )
    criterion = nn.BCEWithLogitsLoss()

    losses = []
    model.train()
    for _ in range(epochs):
        order = list(range(len(train)))
        rng.shuffle(order)
        total, count = 0.0, 0
        for start in range(0, len(order), batch_size):
            chunk = [train[i] for i in order[start : start + batch_size]]
            ids, segs = _batch(chunk, vocab, model_cfg.max_len, vocab.pad)
            labels = torch.tensor([float(p["label"]) for p in chunk])
            logits = model(ids, segs)
            loss = criterion(logits, labels)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * len(chunk)
            count += len(chunk)
        losses.append(total / count)

    scores = score_pairs_with(model, vocab, [(p["concepts"], p["sentence"]) for p in holdout])
    pos = [s for s, p in zip(scores, holdout) if p["label"] == 1]
    neg = [s for s, p in zip(scores, holdout) if p["label"] == 0]
    auc = rank_auc(pos, neg)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "kind.json").write_text(json.dumps({"kind": "scorer", "model": model_cfg.to_json()}))
    vocab.save(out / "vocab.json")
    torch.save(model.state_dict(), out / "weights.pt")
    meta = {"losses": losses, "holdout_auc": auc, "n_train": len(train), "n_holdout": len(holdout)}
    (out / "train_meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    return meta


def load_scorer(checkpoint_dir):
    ckpt = Path(checkpoint_dir)
    meta = json.loads((ckpt / "kind.json").read_text())
    if meta.get("kind") != "scorer":
        raise AdapterDataError(f"{ckpt} is not a scorer checkpoint")
    cfg = TinyModelConfig(**meta["model"])
    vocab = Vocab.load(ckpt / "vocab.json")
    model = CrossEncoderScorer(len(vocab), cfg, pad_id=vocab.pad)
    model.load_state_dict(torch.load(ckpt / "weights.pt", weights_only=True))
    model.eval()
    return vocab, model


@torch.no_grad()
def score_pairs_with(model, vocab, pairs) -> list[float]:
    """Score (concepts, sentence) pairs; batched, eval mode, deterministic."""
    if not pairs:
        return []
    model.eval()
    out = []
    for start in range(0, len(pairs), 64):
        chunk = [{"concepts": c, "sentence": s} for c, s in pairs[start : start + 64]]
        ids, segs = _batch(chunk, vocab, model.cfg.max_len, vocab.pad)
        out.extend(float(v) for v in model.score(ids, segs))
    return out
