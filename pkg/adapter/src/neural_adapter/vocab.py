"""Word-level vocabulary for the compact models.

The toolkit's dataset files are already space-tokenized lowercase text
with a literal `<sep>` delimiter, so splitting on whitespace keeps the
delimiter intact and maps it to its own embedding.
"""

from __future__ import annotations

import json
from pathlib import Path

PAD, BOS, EOS, UNK, CLS, SEP = "<pad>", "<bos>", "<eos>", "<unk>", "<cls>", "<sep>"
SPECIALS = [PAD, BOS, EOS, UNK, CLS, SEP]


def split_text(text: str) -> list[str]:
    return text.lower().split()


class Vocab:
    def __init__(self, tokens: list[str]):
        self.itos = list(tokens)
        self.stoi = {t: i for i, t in enumerate(self.itos)}
        for i, special in enumerate(SPECIALS):
            if self.itos[i] != special:
                raise ValueError("vocabulary must start with the special tokens")
        self.pad, self.bos, self.eos, self.unk, self.cls, self.sep = range(6)

    @classmethod
    def build(cls, texts, min_count: int = 1) -> "Vocab":
        counts: dict[str, int] = {}
        for text in texts:
            for tok in split_text(text):
                if tok not in SPECIALS:
                    counts[tok] = counts.get(tok, 0) + 1
        kept = sorted(t for t, c in counts.items() if c >= min_count)
        return cls(SPECIALS + kept)

    def encode(self, text: str) -> list[int]:
        return [self.stoi.get(tok, self.unk) for tok in split_text(text)]

    def decode(self, ids) -> str:
        words = []
        for i in ids:
            tok = self.itos[int(i)]
            if tok in (PAD, BOS, EOS):
                continue
            words.append(tok)
        return " ".join(words)

    def __len__(self):
        return len(self.itos)

    def save(self, path):
        Path(path).write_text(json.dumps({"tokens": self.itos}) + "\n")

    @classmethod
    def load(cls, path) -> "Vocab":
        return cls(json.loads(Path(path).read_text())["tokens"])
