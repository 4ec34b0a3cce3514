"""Deterministic tokenization, lemmatization, and coarse POS tagging.

Every other module normalizes text through here, so inflected corpus words
("thrown") land on the same lemma as the concept word ("throw"). The tagger
is a lookup table plus ordered suffix rules, not a statistical model: given
the same text it always produces the same tokens.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources


class Pos(str, Enum):
    NOUN = "NOUN"
    PROPN = "PROPN"
    VERB = "VERB"
    OTHER = "OTHER"


# Ambiguous lexicon entries resolve in this order.
_POS_PRIORITY = (Pos.NOUN, Pos.VERB, Pos.PROPN)

# Word tokens are runs of unicode letters/digits; anything else that is not
# whitespace becomes a single-character punctuation token.
_TOKEN_RE = re.compile(r"[^\W_]+|[^\w\s]|_", re.UNICODE)


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: Pos
    index: int


class LemmaLexicon:
    """Exception table + ordered suffix rules + lemma->POS map."""

    def __init__(self, exceptions, suffix_rules, pos_lexicon):
        self.exceptions = dict(exceptions)
        self.suffix_rules = [(s, r, int(m)) for s, r, m in suffix_rules]
        self.pos_lexicon = {k: frozenset(Pos(p) for p in v) for k, v in pos_lexicon.items()}

    @classmethod
    def from_file(cls, path) -> "LemmaLexicon":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(raw["exceptions"], raw["suffix_rules"], raw["pos_lexicon"])


@lru_cache(maxsize=1)
def default_lexicon() -> LemmaLexicon:
    raw = json.loads(resources.files("protoret.data").joinpath("lexicon.json").read_text())
    return LemmaLexicon(raw["exceptions"], raw["suffix_rules"], raw["pos_lexicon"])


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens with punctuation split into single-char tokens."""
    return _TOKEN_RE.findall(text.lower())


def tokenize_cased(text: str) -> list[str]:
    """Same segmentation as tokenize() but preserving the original casing."""
    return _TOKEN_RE.findall(text)


def lemmatize(surface: str, lexicon: LemmaLexicon | None = None) -> str:
    """Map a lowercased token to its lemma.

    Exception lookup wins; otherwise the first applicable suffix rule;
    otherwise the surface itself. Never returns an empty string.
    """
    lexicon = lexicon or default_lexicon()
    hit = lexicon.exceptions.get(surface)
    if hit is not None:
        return hit
    for suffix, replacement, min_stem in lexicon.suffix_rules:
        if surface.endswith(suffix) and len(surface) - len(suffix) >= min_stem:
            lemma = surface[: len(surface) - len(suffix)] + replacement
            if lemma:
                return lemma
    return surface


def tag(tokens, lexicon: LemmaLexicon | None = None, cased=None) -> list[Token]:
    """Attach lemma and POS to each token.

    `tokens` must come from tokenize(). `cased` optionally carries the same
    tokens with original casing so that unknown capitalized words inside a
    sentence can be tagged PROPN; without it no PROPN guessing happens.
    """
    lexicon = lexicon or default_lexicon()
    if cased is not None and len(cased) != len(tokens):
        raise ValueError("cased token list length mismatch")
    out = []
    for i, surface in enumerate(tokens):
        lemma = lemmatize(surface, lexicon)
        tags = lexicon.pos_lexicon.get(lemma)
        if tags:
            pos = next(p for p in _POS_PRIORITY if p in tags)
        elif cased is not None and i > 0 and surface[0].isalpha() and cased[i][0].isupper():
            pos = Pos.PROPN
        else:
            pos = Pos.OTHER
        out.append(Token(surface=surface, lemma=lemma, pos=pos, index=i))
    return out


def analyze(text: str, lexicon: LemmaLexicon | None = None) -> list[Token]:
    """tokenize + tag in one step, using the raw text for PROPN detection."""
    return tag(tokenize(text), lexicon, cased=tokenize_cased(text))


def normalize_text(text: str) -> str:
    """Canonical form used for exact-match comparisons: tokens space-joined."""
    return " ".join(tokenize(text))
