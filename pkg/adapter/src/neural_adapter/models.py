"""Compact transformer models trained from scratch at toy scale."""

from __future__ import annotations

import math

import torch
from torch import nn

from .config import TinyModelConfig


class PositionalEncoding(nn.Module):
    def __init__(self, d_model: int, max_len: int):
        super().__init__()
        pe = torch.zeros(max_len, d_model)
        position = torch.arange(max_len).unsqueeze(1).float()
        div = torch.exp(torch.arange(0, d_model, 2).float() * (-math.log(10000.0) / d_model))
        pe[:, 0::2] = torch.sin(position * div)
        pe[:, 1::2] = torch.cos(position * div)
        self.register_buffer("pe", pe)

    def forward(self, x):
        return x + self.pe[: x.size(1)].unsqueeze(0)


class Seq2SeqTransformer(nn.Module):
    """Encoder-decoder over a word vocabulary; greedy decoding."""

    def __init__(self, vocab_size: int, cfg: TinyModelConfig, pad_id: int):
        super().__init__()
        self.cfg = cfg
        self.pad_id = pad_id
        self.embed = nn.Embedding(vocab_size, cfg.d_model, padding_idx=pad_id)
        self.pos = PositionalEncoding(cfg.d_model, cfg.max_len)
        self.transformer = nn.Transformer(
            d_model=cfg.d_model,
            nhead=cfg.n_heads,
            num_encoder_layers=cfg.n_layers,
            num_decoder_layers=cfg.n_layers,
            dim_feedforward=cfg.ffn_size,
            dropout=cfg.dropout,
            batch_first=True,
        )
        # the fast nested-tensor path is prototype-stage and warns; skip it
        self.transformer.encoder.use_nested_tensor = False
        self.head = nn.Linear(cfg.d_model, vocab_size)

    def forward(self, src, tgt_in):
        src_emb = self.pos(self.embed(src))
        tgt_emb = self.pos(self.embed(tgt_in))
        causal = torch.triu(
            torch.ones(tgt_in.size(1), tgt_in.size(1), dtype=torch.bool, device=tgt_in.device), diagonal=1
        )
        out = self.transformer(
            src_emb,
            tgt_emb,
            tgt_mask=causal,
            src_key_padding_mask=src == self.pad_id,
            tgt_key_padding_mask=tgt_in == self.pad_id,
            memory_key_padding_mask=src == self.pad_id,
        )
        return self.head(out)

    @torch.no_grad()
    def greedy_decode(self, src, bos_id: int, eos_id: int, max_len: int = 32):
        """Decode one sequence; never returns an empty output."""
        self.eval()
        tgt = torch.tensor([[bos_id]], dtype=torch.long, device=src.device)
        for step in range(max_len):
            logits = self.forward(src, tgt)[0, -1]
            if step == 0:
                logits[eos_id] = float("-inf")  # force at least one real token
            nxt = int(logits.argmax())
            tgt = torch.cat([tgt, torch.tensor([[nxt]], device=src.device)], dim=1)
            if nxt == eos_id:
                break
        return tgt[0, 1:]


class CrossEncoderScorer(nn.Module):
    """[cls] concepts [sep] sentence [sep] -> sigmoid relevance.

    Segment embeddings mark the concept part vs the sentence part. The
    output head starts at zero so an untrained scorer emits exactly 0.5.
    """

    def __init__(self, vocab_size: int, cfg: TinyModelConfig, pad_id: int):
        super().__init__()
        self.cfg = cfg
        self.pad_id = pad_id
        self.embed = nn.Embedding(vocab_size, cfg.d_model, padding_idx=pad_id)
        self.segment = nn.Embedding(2, cfg.d_model)
        self.pos = PositionalEncoding(cfg.d_model, cfg.max_len)
        layer = nn.TransformerEncoderLayer(
            d_model=cfg.d_model,
            nhead=cfg.n_heads,
            dim_feedforward=cfg.ffn_size,
            dropout=cfg.dropout,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=cfg.n_layers, enable_nested_tensor=False)
        self.head = nn.Linear(cfg.d_model, 1)
        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)

    def forward(self, ids, segments):
        x = self.pos(self.embed(ids) + self.segment(segments))
        out = self.encoder(x, src_key_padding_mask=ids == self.pad_id)
        return self.head(out[:, 0, :]).squeeze(-1)  # logit at the [cls] position

    @torch.no_grad()
    def score(self, ids, segments):
        self.eval()
        return torch.sigmoid(self.forward(ids, segments))
