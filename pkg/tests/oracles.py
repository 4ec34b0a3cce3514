"""Brute-force reference implementations used to check the library.

Everything here is a direct, unoptimized transcription of the standard
definitions (explicit loops, no shared code with the package). Written
before the corresponding library code; the tests compare the two.
"""

import math
from collections import Counter


def ngram_counts(tokens, n):
    counts = Counter()
    for i in range(len(tokens) - n + 1):
        counts[tuple(tokens[i : i + n])] += 1
    return counts


def bleu4_oracle(hypotheses, references):
    """Corpus BLEU, n=1..4, uniform weights, multi-reference clipped counts."""
    clipped = [0, 0, 0, 0]
    totals = [0, 0, 0, 0]
    hyp_len = 0
    ref_len = 0
    for hyp, refs in zip(hypotheses, references):
        hyp_len += len(hyp)
        # closest reference length; ties resolved toward the shorter one
        best = None
        for ref in refs:
            d = abs(len(ref) - len(hyp))
            if best is None or d < best[0] or (d == best[0] and len(ref) < best[1]):
                best = (d, len(ref))
        ref_len += best[1]
        for n in range(1, 5):
            hyp_counts = ngram_counts(hyp, n)
            max_ref = Counter()
            for ref in refs:
                for gram, c in ngram_counts(ref, n).items():
                    if c > max_ref[gram]:
                        max_ref[gram] = c
            for gram, c in hyp_counts.items():
                clipped[n - 1] += min(c, max_ref[gram])
                totals[n - 1] += c
    precisions = []
    for n in range(4):
        if totals[n] == 0 or clipped[n] == 0:
            return 0.0
        precisions.append(clipped[n] / totals[n])
    log_avg = sum(math.log(p) for p in precisions) / 4
    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    return bp * math.exp(log_avg)


def lcs_length(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def rouge_l_oracle(hypothesis, references):
    """Max over references of the LCS F1 score."""
    best = 0.0
    for ref in references:
        lcs = lcs_length(hypothesis, ref)
        if lcs == 0 or not hypothesis or not ref:
            f1 = 0.0
        else:
            p = lcs / len(hypothesis)
            r = lcs / len(ref)
            f1 = 2 * p * r / (p + r)
        best = max(best, f1)
    return best


def cider_oracle(hypotheses, references):
    """Plain CIDEr: tf-idf cosine per n in 1..4, averaged, scaled by 10.

    idf comes from the reference corpus: log(N / max(1, df)) where df is
    the number of instances whose reference set contains the n-gram.
    """
    n_instances = len(hypotheses)
    per_instance = []
    for hyp, refs in zip(hypotheses, references):
        n_scores = []
        for n in range(1, 5):
            df = Counter()
            for refs2 in references:
                present = set()
                for ref in refs2:
                    present |= set(ngram_counts(ref, n).keys())
                for gram in present:
                    df[gram] += 1
            hyp_counts = ngram_counts(hyp, n)
            hyp_vec = {g: c * math.log(n_instances / max(1.0, df[g])) for g, c in hyp_counts.items()}
            hyp_norm = math.sqrt(sum(v * v for v in hyp_vec.values()))
            cosines = []
            for ref in refs:
                ref_counts = ngram_counts(ref, n)
                ref_vec = {g: c * math.log(n_instances / max(1.0, df[g])) for g, c in ref_counts.items()}
                ref_norm = math.sqrt(sum(v * v for v in ref_vec.values()))
                if hyp_norm == 0 or ref_norm == 0:
                    cosines.append(0.0)
                    continue
                dot = sum(v * ref_vec.get(g, 0.0) for g, v in hyp_vec.items())
                cosines.append(dot / (hyp_norm * ref_norm))
            n_scores.append(sum(cosines) / len(cosines))
        per_instance.append(10.0 * sum(n_scores) / 4)
    return sum(per_instance) / n_instances


def match_counts_bruteforce(records, concepts):
    """Per-record distinct-concept containment count, by scanning lemma sets."""
    out = {}
    for rec in records:
        out[rec.id] = sum(1 for c in set(concepts) if c in rec.lemma_set)
    return out


def candidates_bruteforce(records, concepts, min_overlap):
    counts = match_counts_bruteforce(records, concepts)
    return sorted((rid, c) for rid, c in counts.items() if c >= min_overlap)
