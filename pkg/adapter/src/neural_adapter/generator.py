"""Sequence-to-sequence generator training and inference.

Consumes the pipeline's dataset JSONL (`source` = concepts and `<sep>`
delimited prototypes, `target` = sentence). Sources that exceed the model
window are shortened by dropping whole prototype segments from the end;
the count of dropped segments is logged.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch import nn

from .config import TinyModelConfig
from .data import AdapterDataError, load_examples
from .models import Seq2SeqTransformer
from .vocab import SEP, Vocab


def truncate_source(source: str, budget: int) -> tuple[str, int]:
    """Drop whole prototype segments from the end until within budget tokens."""
    segments = source.split(f" {SEP} ")
    dropped = 0
    while len(segments) > 1 and len(f" {SEP} ".join(segments).split()) > budget:
        segments.pop()
        dropped += 1
    return f" {SEP} ".join(segments), dropped


def _tensorize(examples, vocab: Vocab, max_len: int):
    srcs, tgts = [], []
    truncated = 0
    for ex in examples:
        source, dropped = truncate_source(ex["source"], max_len)
        truncated += dropped
        src = vocab.encode(source)[:max_len]
        tgt = [vocab.bos] + vocab.encode(ex["target"])[: max_len - 2] + [vocab.eos]
        srcs.append(torch.tensor(src, dtype=torch.long))
        tgts.append(torch.tensor(tgt, dtype=torch.long))
    return srcs, tgts, truncated


def _pad_batch(seqs, pad_id):
    width = max(len(s) for s in seqs)
    out = torch.full((len(seqs), width), pad_id, dtype=torch.long)
    for i, s in enumerate(seqs):
        out[i, : len(s)] = s
    return out


def train_generator(examples_path, output_dir, epochs: int = 3, learning_rate: float = 3e-4,
                    batch_size: int = 16, seed: int = 0, weight_decay: float = 0.01,
                    adam_epsilon: float = 1e-6, model_cfg: TinyModelConfig | None = None,
                    init_checkpoint=None) -> list[float]:
    """Train (or continue training) the generator; returns per-epoch losses."""
    model_cfg = model_cfg or TinyModelConfig()
    examples = load_examples(examples_path)
    torch.manual_seed(seed)

    if init_checkpoint is not None:
        vocab, model, _ = load_generator(init_checkpoint)
        model_cfg = model.cfg
    else:
        vocab = Vocab.build([ex["source"] for ex in examples] + [ex["target"] for ex in examples])
        model = Seq2SeqTransformer(len(vocab), model_cfg, pad_id=vocab.pad)

    srcs, tgts, truncated = _tensorize(examples, vocab, model_cfg.max_len)
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=learning_rate, weight_decay=weight_decay, eps=adam_epsilon
    )
    criterion = nn.CrossEntropyLoss(ignore_index=vocab.pad)

    losses = []
    model.train()
    for _ in range(epochs):
        total, count = 0.0, 0
        for start in range(0, len(srcs), batch_size):
            src = _pad_batch(srcs[start : start + batch_size], vocab.pad)
            tgt = _pad_batch(tgts[start : start + batch_size], vocab.pad)
            logits = model(src, tgt[:, :-1])
            loss = criterion(logits.reshape(-1, logits.size(-1)), tgt[:, 1:].reshape(-1))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * src.size(0)
            count += src.size(0)
        losses.append(total / count)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "kind.json").write_text(
        json.dumps({"kind": "generator", "model": model_cfg.to_json(), "truncated_prototypes": truncated})
    )
    vocab.save(out / "vocab.json")
    torch.save(model.state_dict(), out / "weights.pt")
    with open(out / "loss_log.jsonl", "w") as fh:
        for i, loss in enumerate(losses):
            fh.write(json.dumps({"epoch": i, "loss": loss}) + "\n")
    return losses


def load_generator(checkpoint_dir):
    ckpt = Path(checkpoint_dir)
    meta = json.loads((ckpt / "kind.json").read_text())
    if meta.get("kind") != "generator":
        raise AdapterDataError(f"{ckpt} is not a generator checkpoint")
    cfg = TinyModelConfig(**meta["model"])
    vocab = Vocab.load(ckpt / "vocab.json")
    model = Seq2SeqTransformer(len(vocab), cfg, pad_id=vocab.pad)
    model.load_state_dict(torch.load(ckpt / "weights.pt", weights_only=True))
    model.eval()
    return vocab, model, meta


def generate(checkpoint_dir, source: str, max_len: int = 32) -> str:
    """Greedy-decode a sentence for a `concepts <sep> prototypes` input."""
    vocab, model, _ = load_generator(checkpoint_dir)
    source, _ = truncate_source(source, model.cfg.max_len)
    src = torch.tensor([vocab.encode(source)[: model.cfg.max_len]], dtype=torch.long)
    ids = model.greedy_decode(src, bos_id=vocab.bos, eos_id=vocab.eos, max_len=max_len)
    return vocab.decode(ids)
