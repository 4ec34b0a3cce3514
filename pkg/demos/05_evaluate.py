"""Metric walkthrough: BLEU-4, ROUGE-L, CIDEr, and concept coverage.

Coverage is the cheap diagnostic for the classic failure mode of concept-
conditioned generation: fluent output that silently drops a concept.
"""

from protoret import ConceptSet, bleu4, cider, coverage, rouge_l
from protoret.textnorm import tokenize

concepts = ConceptSet(("trailer", "shirt", "side", "sit", "road"))
outputs = [
    "A man sits on the side of a trailer and a shirt.",
    "a man in a white shirt and black pants sits on the side of a trailer on the road.",
    "a man in a tan shirt sits on the side of a road.",
]
print(f"concepts: {concepts.concepts}")
for text in outputs:
    print(f"  coverage {coverage(tokenize(text), concepts):.1f}  {text}")

references = [
    ["a man wearing a shirt sits on the side of a trailer by the road .".split()],
    ["the dog leaps and catches the frisbee in the park .".split()],
]
hypotheses = [
    "a man in a shirt sits on the side of a trailer by the road .".split(),
    "a dog catches a frisbee .".split(),
]
print(f"\ncorpus BLEU-4: {bleu4(hypotheses, references):.4f}")
print(f"corpus CIDEr:  {cider(hypotheses, references):.4f}")
for hyp, refs in zip(hypotheses, references):
    print(f"ROUGE-L {rouge_l(hyp, refs):.4f}  <- {' '.join(hyp)}")
