"""Corpus evaluation: BLEU-4, ROUGE-L, CIDEr, and concept coverage.

All metrics tokenize through textnorm so predictions and references share
one normalization path. SPICE is reported as null: it needs a scene-graph
parser this toolkit does not carry; coverage is the cheap diagnostic for
the same failure mode (dropped concepts).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import ConceptSet, load_commongen
from .errors import DataError
from .textnorm import LemmaLexicon, default_lexicon, lemmatize, tokenize


@dataclass
class MetricReport:
    bleu4: float
    rouge_l: float
    cider: float
    coverage: float
    spice: None = None
    per_instance: list | None = None

    def to_json(self) -> dict:
        out = {
            "bleu4": self.bleu4,
            "rouge_l": self.rouge_l,
            "cider": self.cider,
            "coverage": self.coverage,
            "spice": None,
            "notes": {"spice": "not computed: requires scene-graph parsing resources"},
        }
        if self.per_instance is not None:
            out["per_instance"] = self.per_instance
        return out

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")


def _ngrams(tokens, n) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu4(hypotheses, references) -> float:
    """Corpus-level BLEU with n=1..4, uniform weights, no smoothing.

    `hypotheses` is a list of token lists, `references` a parallel list of
    lists of token lists. Any n-level with zero clipped matches (including
    hypotheses too short to have 4-grams) yields 0.0, as unsmoothed BLEU
    does.
    """
    if len(hypotheses) != len(references):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(references)} reference sets")
    clipped = [0] * 4
    total = [0] * 4
    hyp_len = 0
    eff_ref_len = 0
    for hyp, refs in zip(hypotheses, references):
        if not refs:
            raise DataError("every instance needs at least one reference")
        hyp_len += len(hyp)
        eff_ref_len += min((len(r) for r in refs), key=lambda L: (abs(L - len(hyp)), L))
        for n in range(1, 5):
            hyp_counts = _ngrams(hyp, n)
            if not hyp_counts:
                continue
            max_ref: Counter = Counter()
            for ref in refs:
                for gram, c in _ngrams(ref, n).items():
                    if c > max_ref[gram]:
                        max_ref[gram] = c
            total[n - 1] += sum(hyp_counts.values())
            clipped[n - 1] += sum(min(c, max_ref[gram]) for gram, c in hyp_counts.items())
    if any(t == 0 or c == 0 for c, t in zip(clipped, total)):
        return 0.0
    log_precision = sum(math.log(c / t) for c, t in zip(clipped, total)) / 4
    brevity = 1.0 if hyp_len > eff_ref_len else math.exp(1 - eff_ref_len / hyp_len)
    return brevity * math.exp(log_precision)


def clipped_counts(hypothesis, references, n) -> tuple[int, int]:
    """(clipped, total) n-gram matches for one instance; exposed for auditing."""
    hyp_counts = _ngrams(hypothesis, n)
    max_ref: Counter = Counter()
    for ref in references:
        for gram, c in _ngrams(ref, n).items():
            if c > max_ref[gram]:
                max_ref[gram] = c
    return sum(min(c, max_ref[g]) for g, c in hyp_counts.items()), sum(hyp_counts.values())


def rouge_l(hypothesis, references) -> float:
    """Best LCS-based F1 over the references."""
    if not references:
        raise DataError("rouge_l needs at least one reference")
    if not hypothesis:
        return 0.0
    best = 0.0
    for ref in references:
        lcs = _lcs(hypothesis, ref)
        if lcs and ref:
            p = lcs / len(hypothesis)
            r = lcs / len(ref)
            best = max(best, 2 * p * r / (p + r))
    return best


def _lcs(a, b) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def cider(hypotheses, references) -> float:
    """Mean tf-idf n-gram cosine (n=1..4) against references, scaled by 10.

    Document frequencies come from the reference corpus itself, so a
    meaningful idf needs at least two instances.
    """
    if len(hypotheses) != len(references):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(references)} reference sets")
    n_instances = len(hypotheses)
    if n_instances < 2:
        raise DataError("cider needs a corpus of >= 2 instances to compute idf")
    scores = per_instance_cider(hypotheses, references)
    return sum(scores) / n_instances


def per_instance_cider(hypotheses, references) -> list[float]:
    n_instances = len(hypotheses)
    log_n = math.log(n_instances)
    dfs = []
    for n in range(1, 5):
        df: Counter = Counter()
        for refs in references:
            grams = set()
            for ref in refs:
                grams.update(_ngrams(ref, n).keys())
            df.update(grams)
        dfs.append(df)

    def tfidf(tokens, n):
        vec = {}
        for gram, c in _ngrams(tokens, n).items():
            vec[gram] = c * (log_n - math.log(max(1.0, dfs[n - 1][gram])))
        norm = math.sqrt(sum(v * v for v in vec.values()))
        return vec, norm

    scores = []
    for hyp, refs in zip(hypotheses, references):
        acc = 0.0
        for n in range(1, 5):
            hyp_vec, hyp_norm = tfidf(hyp, n)
            cos_sum = 0.0
            for ref in refs:
                ref_vec, ref_norm = tfidf(ref, n)
                if hyp_norm > 0 and ref_norm > 0:
                    dot = sum(v * ref_vec.get(g, 0.0) for g, v in hyp_vec.items())
                    cos_sum += dot / (hyp_norm * ref_norm)
            acc += cos_sum / len(refs)
        scores.append(10.0 * acc / 4)
    return scores


def coverage(hypothesis, concepts: ConceptSet, lexicon: LemmaLexicon | None = None) -> float:
    """Fraction of concepts whose lemma appears among the hypothesis lemmas."""
    if not concepts.concepts:
        raise DataError("coverage needs a non-empty concept set")
    lexicon = lexicon or default_lexicon()
    hyp_lemmas = {lemmatize(tok, lexicon) for tok in hypothesis}
    hit = sum(1 for c in set(concepts.concepts) if c in hyp_lemmas)
    return hit / len(set(concepts.concepts))


def load_predictions(path) -> dict[tuple[str, ...], str]:
    """Predictions JSONL {"concepts": [...], "prediction": str}, keyed by concept set."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read predictions file {path}: {exc}") from exc
    out: dict[tuple[str, ...], str] = {}
    for i, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        row = json.loads(line)
        if "concepts" not in row or "prediction" not in row:
            raise DataError(f"{path}: record {i}: needs 'concepts' and 'prediction' fields")
        key = ConceptSet.from_words(row["concepts"]).key()
        out[key] = row["prediction"]
    if not out:
        raise DataError(f"predictions file {path} is empty")
    return out


def evaluate(predictions_path, references_path, lexicon: LemmaLexicon | None = None,
             per_instance: bool = False) -> MetricReport:
    """Score a predictions file against a references file, aligned by concept set."""
    lexicon = lexicon or default_lexicon()
    preds = load_predictions(predictions_path)
    entries = load_commongen(references_path, lexicon)
    refs_by_key: dict[tuple[str, ...], dict] = {}
    for e in entries:
        if not e.targets:
            raise DataError(f"reference entry {e.concept_set.concepts} has no targets")
        refs_by_key[e.concept_set.key()] = {"entry": e}

    missing = sorted(set(refs_by_key) - set(preds))
    extra = sorted(set(preds) - set(refs_by_key))
    if missing or extra:
        raise DataError(
            "prediction/reference concept sets do not align; "
            f"missing predictions for {missing[:5]}{'...' if len(missing) > 5 else ''}, "
            f"unmatched predictions {extra[:5]}{'...' if len(extra) > 5 else ''}"
        )

    keys = sorted(refs_by_key)
    hyps = [tokenize(preds[k]) for k in keys]
    refs = [[tokenize(t) for t in refs_by_key[k]["entry"].targets] for k in keys]
    csets = [refs_by_key[k]["entry"].concept_set for k in keys]

    rouge_values = [rouge_l(h, r) for h, r in zip(hyps, refs)]
    coverage_values = [coverage(h, c, lexicon) for h, c in zip(hyps, csets)]
    cider_values = per_instance_cider(hyps, refs) if len(keys) >= 2 else None
    if cider_values is None:
        raise DataError("cider needs a corpus of >= 2 instances to compute idf")

    report = MetricReport(
        bleu4=bleu4(hyps, refs),
        rouge_l=sum(rouge_values) / len(keys),
        cider=sum(cider_values) / len(keys),
        coverage=sum(coverage_values) / len(keys),
    )
    if per_instance:
        report.per_instance = [
            {
                "concepts": list(c.concepts),
                "rouge_l": rv,
                "cider": cv,
                "coverage": cov,
            }
            for c, rv, cv, cov in zip(csets, rouge_values, cider_values, coverage_values)
        ]
    return report
