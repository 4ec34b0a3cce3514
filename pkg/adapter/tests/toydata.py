import json
import random
from pathlib import Path


FILLERS = ["table", "chair", "window", "floor", "door", "wall", "lamp", "room", "corner", "shelf"]
CONCEPTS = ["dog", "cat", "ball", "park", "boy", "girl", "water", "tree", "bird", "car",
            "lake", "shore", "canoe", "beach", "sand"]


def toy_pairs(n=1000, seed=0):
    """Learnable relevance signal: positives contain every concept word,
    negatives at most one."""
    rng = random.Random(seed)
    rows = []
    for _ in range(n // 2):
        cs = rng.sample(CONCEPTS, 3)
        pos = cs + rng.sample(FILLERS, 2)
        rng.shuffle(pos)
        neg = rng.sample(FILLERS, 4) + rng.sample(CONCEPTS, rng.randint(0, 1))
        rng.shuffle(neg)
        rows.append({"concepts": cs, "sentence": "the " + " ".join(pos) + " .", "label": 1})
        rows.append({"concepts": cs, "sentence": "the " + " ".join(neg) + " .", "label": 0})
    return rows


def toy_examples(n=100, seed=0):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        cs = rng.sample(CONCEPTS, 3)
        proto = "a " + " ".join(rng.sample(CONCEPTS, 2)) + " ."
        rows.append({
            "source": " ".join(cs) + " <sep> " + proto,
            "target": "the " + " ".join(cs) + " .",
        })
    return rows


def write_jsonl(path, rows):
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return Path(path)
