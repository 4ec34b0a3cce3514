"""Text normalization walkthrough: tokenize, lemmatize, tag.

Every stage of the toolkit sees text through this one deterministic path,
which is what lets an inflected corpus word ("thrown") match a base-form
concept ("throw").
"""

from protoret import analyze, lemmatize, normalize_text, tokenize

sentences = [
    "A dog leaps to catch a thrown frisbee.",
    "Several canoes parked in the grass on the shore of a lake.",
    "He met Zorblax near the river!",
]

for text in sentences:
    print(f"\ntext:    {text}")
    print(f"tokens:  {tokenize(text)}")
    print(f"normal:  {normalize_text(text)}")
    print("tagged:  " + "  ".join(f"{t.surface}/{t.lemma}/{t.pos.value}" for t in analyze(text)))

print("\nlemmatizer spot checks:")
for word in ["thrown", "canoes", "catches", "sitting", "women", "was"]:
    print(f"  {word:10s} -> {lemmatize(word)}")
