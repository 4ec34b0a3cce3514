#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus under data/fixtures/.

Produces two external corpus files (~1k sentences), three benchmark-format
JSONL splits, and a concept vocabulary. Plants known overlap on purpose:
some external sentences equal train/dev targets (target-exclusion must
catch them) and some have pseudo concept sets equal to test concept sets
(the leakage filter must catch those).

Deterministic for a fixed seed; run from the repo root:

    python scripts/make_fixtures.py
"""

import json
import random
from pathlib import Path

from protoret.textnorm import Pos, default_lexicon, lemmatize

OUT = Path(__file__).resolve().parent.parent / "data" / "fixtures"
SEED = 20240601

NOUNS = """
dog cat frisbee boy girl man woman guy kid canoe lake shore rainbow grass
field park ball tree air trailer shirt side road street car truck horse
beach sand wave ocean river mountain hill snow board kitchen table chair
bowl bread cheese apple fruit salad coffee water bottle basket bag hat
coat jacket crowd team player game city town house door window room bed
book phone camera picture guitar piano drum song band stage bird fish
duck cow sheep pig chicken bear monkey rabbit garden flower rock sun
moon star sky cloud rain fire bench fence gate bridge boat ship wood
forest path market store shelf box toy kite balloon rope wheel train
plane station bus helmet yard pool net goal court track
""".split()

VERBS = """
catch throw run walk jump leap sit stand climb swim dive ride drive play
eat drink cook wash open close push pull lift carry hold drop pick move
turn spin roll slide skate surf paddle row sail chase follow watch look
point wave smile laugh shout talk sing dance listen read write draw
paint build kick hit toss serve bounce shoot race jog stretch grab touch
feed wear park stop start finish wait cross pass meet join help teach
learn study work rest sleep practice fetch celebrate pour stir mix taste
splash float land hop skip flip clap crawl cheer stroll hike swing hang
share hug kiss greet visit
""".split()

IRREGULAR_THIRD = {"go": "goes", "do": "does", "have": "has", "be": "is"}
IRREGULAR_ING = {
    "sit": "sitting", "run": "running", "swim": "swimming", "jog": "jogging",
    "hop": "hopping", "skip": "skipping", "flip": "flipping", "clap": "clapping",
    "hug": "hugging", "stop": "stopping", "grab": "grabbing", "spin": "spinning",
    "hit": "hitting", "ride": "riding", "drive": "driving", "dive": "diving",
    "slide": "sliding", "skate": "skating", "paddle": "paddling", "wave": "waving",
    "smile": "smiling", "dance": "dancing", "write": "writing", "serve": "serving",
    "bounce": "bouncing", "race": "racing", "move": "moving", "share": "sharing",
    "hike": "hiking", "close": "closing", "taste": "tasting", "chase": "chasing",
    "practice": "practicing", "celebrate": "celebrating", "stroll": "strolling",
}


def third_person(verb: str) -> str:
    if verb in IRREGULAR_THIRD:
        return IRREGULAR_THIRD[verb]
    if verb.endswith(("ch", "sh", "ss", "x", "z", "o")):
        return verb + "es"
    if verb.endswith("y") and verb[-2] not in "aeiou":
        return verb[:-1] + "ies"
    return verb + "s"


def ing_form(verb: str) -> str:
    if verb in IRREGULAR_ING:
        return IRREGULAR_ING[verb]
    if verb.endswith("e") and not verb.endswith("ee"):
        return verb[:-1] + "ing"
    return verb + "ing"


def plural(noun: str) -> str:
    if noun.endswith(("ch", "sh", "s", "x", "z")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


def self_check():
    """Every generated surface form must lemmatize back to its base word."""
    lex = default_lexicon()
    for n in NOUNS:
        assert lemmatize(n, lex) == n, f"noun {n} not a lemma"
        assert Pos.NOUN in lex.pos_lexicon.get(n, ()), f"noun {n} missing NOUN tag"
        got = lemmatize(plural(n), lex)
        assert got == n, f"plural {plural(n)} -> {got}, want {n}"
    for v in VERBS:
        assert lemmatize(v, lex) == v, f"verb {v} not a lemma"
        assert Pos.VERB in lex.pos_lexicon.get(v, ()), f"verb {v} missing VERB tag"
        for form in (third_person(v), ing_form(v)):
            got = lemmatize(form, lex)
            assert got == v, f"form {form} -> {got}, want {v}"


def sentence_for(concepts, rng):
    """A sentence whose content lemmas are exactly `concepts`.

    Fillers are function words only, so the pseudo concept set of the
    sentence equals the concept set.
    """
    nouns = [c for c in concepts if c in set(NOUNS)]
    verbs = [c for c in concepts if c not in set(NOUNS)]
    rng.shuffle(nouns)
    preps = ["near", "by", "beside", "under", "over", "at"]
    if not verbs:
        parts = [f"a {nouns[0]}"]
        for n in nouns[1:]:
            parts.append(f"{rng.choice(preps)} the {n}")
        return " ".join(parts) + " ."
    verb = verbs[0]
    extra_verbs = verbs[1:]
    style = rng.randrange(3)
    if style == 0 and nouns:
        head, rest = nouns[0], nouns[1:]
        out = f"a {head} {third_person(verb)}"
    elif style == 1 and nouns:
        head, rest = nouns[0], nouns[1:]
        out = f"two {plural(head)} {verb}"
    else:
        head, rest = (nouns[0], nouns[1:]) if nouns else (None, [])
        out = f"the {head} is {ing_form(verb)}" if head else f"someone is {ing_form(verb)}"
    for i, n in enumerate(rest):
        out += f" {'the' if i % 2 else 'a'} {n}" if i == 0 else f" {rng.choice(preps)} the {n}"
    for v in extra_verbs:
        out += f" and {third_person(v)}"
    return out + " ."


def pick_concepts(rng, n_min=3, n_max=5):
    n = rng.randint(n_min, n_max)
    n_verbs = rng.choice([1, 1, 1, 2])
    verbs = rng.sample(VERBS, min(n_verbs, n - 1))
    nouns = rng.sample(NOUNS, n - len(verbs))
    concepts = nouns + verbs
    rng.shuffle(concepts)
    return concepts


def main():
    self_check()
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    # benchmark-format splits
    used_keys = set()

    def fresh_concepts(*args, **kwargs):
        while True:
            c = pick_concepts(rng, *args, **kwargs)
            key = frozenset(c)
            if key not in used_keys:
                used_keys.add(key)
                return c

    train, dev, test = [], [], []
    for _ in range(60):
        concepts = fresh_concepts()
        targets = [sentence_for(list(concepts), rng) for _ in range(rng.randint(1, 3))]
        train.append({"concepts": concepts, "targets": sorted(set(targets))})
    for _ in range(12):
        concepts = fresh_concepts()
        targets = [sentence_for(list(concepts), rng) for _ in range(rng.randint(2, 3))]
        dev.append({"concepts": concepts, "targets": sorted(set(targets))})
    for _ in range(12):
        test.append({"concepts": fresh_concepts(), "targets": []})

    # external corpus: random caption-like sentences ...
    captions = [sentence_for(pick_concepts(rng, 2, 6), rng) for _ in range(600)]
    activity = [sentence_for(pick_concepts(rng, 2, 6), rng) for _ in range(380)]
    # ... plus planted target copies (exclusion must remove these)
    planted_targets = []
    for entry in train[:6] + dev[:4]:
        planted_targets.append(entry["targets"][0])
    # ... plus planted test-concept sentences (leakage filter must drop these)
    planted_leaks = [sentence_for(list(e["concepts"]), rng) for e in test[:8]]

    rng.shuffle(captions)
    rng.shuffle(activity)
    captions = captions + planted_targets[:6] + planted_leaks[:4]
    activity = activity + planted_targets[6:] + planted_leaks[4:]
    rng.shuffle(captions)
    rng.shuffle(activity)

    (OUT / "external_captions.txt").write_text("\n".join(captions) + "\n")
    (OUT / "external_activity.txt").write_text("\n".join(activity) + "\n")
    for name, rows in [("commongen_train", train), ("commongen_dev", dev), ("commongen_test", test)]:
        with open(OUT / f"{name}.jsonl", "w") as fh:
            for row in rows:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    (OUT / "concept_vocab.txt").write_text("\n".join(sorted(set(NOUNS + VERBS))) + "\n")

    print(f"fixtures written to {OUT}")
    print(f"  captions={len(captions)} activity={len(activity)}")
    print(f"  train={len(train)} dev={len(dev)} test={len(test)}")
    print(f"  planted target copies={len(planted_targets)} planted leaks={len(planted_leaks)}")


if __name__ == "__main__":
    main()
