import json
import random
import shutil
import subprocess
import sys
from pathlib import Path

from protoret.corpus import SentenceStore, Split, ingest_corpus
from protoret.textnorm import default_lexicon

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"

# Gold sentences for the two benchmark concept sets used throughout the tests.
GOLD_SENTENCES = [
    "A dog leaps to catch a thrown frisbee.",
    "The dog catches the frisbee when the boy throws it.",
    "A man throws away his dog 's favorite frisbee expecting him to catch it in the air.",
    "Canoe on a shore of lake.",
    "Canoe on shore with rainbow across the lake.",
    "Several canoes parked in the grass on the shore of a lake.",
]


def make_store(sentences, source="test", split=Split.EXTERNAL, seal=True) -> SentenceStore:
    from protoret.textnorm import tag, tokenize, tokenize_cased

    store = SentenceStore()
    lex = default_lexicon()
    for text in sentences:
        store.add(text, tag(tokenize(text), lex, cased=tokenize_cased(text)), source, split)
    if seal:
        store.seal()
    return store


def auc(pos_scores, neg_scores) -> float:
    """Rank-sum AUC: P(score_pos > score_neg), ties counting half."""
    wins = 0.0
    for p in pos_scores:
        for n in neg_scores:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos_scores) * len(neg_scores))


def pairwise_accuracy(pos_scores, neg_scores) -> float:
    wins = sum(1 for p in pos_scores for n in neg_scores if p > n)
    return wins / (len(pos_scores) * len(neg_scores))


def synthetic_sentences(n, seed=0, vocab_size=60):
    """Deterministic nonsense corpus over a small closed vocabulary."""
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(vocab_size)]
    out = []
    for _ in range(n):
        length = rng.randint(3, 12)
        out.append(" ".join(rng.choice(vocab) for _ in range(length)) + " .")
    return out


CONTENT_WORDS = """
dog cat ball park boy girl water tree bird car frisbee beach sand wave
lake shore canoe boat kitchen table chair bowl bread cheese apple garden
flower rock star sky cloud fence bridge train plane horse field grass
catch throw run walk jump leap sit stand climb swim ride drive play eat
drink cook wash open close push pull carry hold watch look smile laugh
talk sing dance read write draw paint build kick toss race grab wear
""".split()


def content_sentences(n, seed=0, min_words=3, max_words=7):
    """Sentences of known content lemmas, so POS tagging finds concepts."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        words = rng.sample(CONTENT_WORDS, rng.randint(min_words, max_words))
        out.append("the " + " ".join(words) + " .")
    return out


def separable_pairs(n=120, seed=0):
    """Synthetic pairs: positives contain every concept, negatives at most one."""
    from protoret.corpus import ConceptSet
    from protoret.retrieval import TrainingPair

    rng = random.Random(seed)
    fillers = ["table", "chair", "window", "floor", "door", "wall", "lamp", "room"]
    concept_pool = ["dog", "cat", "ball", "park", "boy", "girl", "water", "tree", "bird", "car"]
    pairs = []
    for _ in range(n // 2):
        concepts = rng.sample(concept_pool, 3)
        pos_words = concepts + rng.sample(fillers, 2)
        rng.shuffle(pos_words)
        neg_words = rng.sample(fillers, 4) + rng.sample(concepts, 1 if rng.random() < 0.5 else 0)
        rng.shuffle(neg_words)
        cs = ConceptSet(tuple(concepts))
        pairs.append(TrainingPair(cs, "the " + " ".join(pos_words) + " .", 1))
        pairs.append(TrainingPair(cs, "the " + " ".join(neg_words) + " .", 0))
    return pairs


def cli(args, cwd, check=True):
    """Run the installed CLI as a subprocess with relative paths."""
    proc = subprocess.run(
        [sys.executable, "-m", "protoret", *args], cwd=cwd, capture_output=True, text=True
    )
    if check and proc.returncode != 0:
        raise AssertionError(f"protoret {' '.join(args)} failed ({proc.returncode}):\n{proc.stderr}\n{proc.stdout}")
    return proc


def run_fixture_pipeline(rundir: Path):
    """Drive the whole pipeline on the bundled fixtures inside `rundir`.

    Uses relative paths throughout so two runs in different directories
    produce byte-identical artifacts. Returns the output file names.
    """
    rundir = Path(rundir)
    fx = rundir / "fixtures"
    shutil.copytree(FIXTURES, fx)
    out = rundir / "out"
    out.mkdir()

    cli(["ingest", "--store", "store", "--input", "fixtures/external_captions.txt", "--source", "captions"], rundir)
    cli(["ingest", "--store", "store", "--input", "fixtures/external_activity.txt", "--source", "activity"], rundir)
    cli(
        [
            "exclude-targets", "--store", "store",
            "--commongen", "fixtures/commongen_train.jsonl", "fixtures/commongen_dev.jsonl",
            "fixtures/commongen_test.jsonl",
        ],
        rundir,
    )
    cli(["sample-pool", "--store", "store", "--size", "500", "--seed", "13", "--output", "out/pool.json"], rundir)
    cli(["build-index", "--store", "store", "--output", "out/index.json"], rundir)
    cli(
        ["build-pairs", "--commongen", "fixtures/commongen_train.jsonl", "--neg-per-pos", "1",
         "--seed", "5", "--output", "out/pairs.jsonl"],
        rundir,
    )
    cli(
        ["train-scorer", "--pairs", "out/pairs.jsonl", "--epochs", "120", "--learning-rate", "0.5",
         "--seed", "5", "--output", "out/scorer.json"],
        rundir,
    )
    cli(
        ["build-pretrain", "--store", "store", "--index", "out/index.json", "--pool", "out/pool.json",
         "--vocab", "fixtures/concept_vocab.txt", "--commongen-test", "fixtures/commongen_test.jsonl",
         "--k", "3", "--seed", "21", "--output", "out/pretrain.jsonl"],
        rundir,
    )
    cli(
        ["build-finetune", "--store", "store", "--index", "out/index.json",
         "--commongen", "fixtures/commongen_train.jsonl", "--retriever", "feature",
         "--model", "out/scorer.json", "--k", "3", "--output", "out/finetune_train.jsonl"],
        rundir,
    )
    cli(
        ["build-finetune", "--store", "store", "--index", "out/index.json",
         "--commongen", "fixtures/commongen_test.jsonl", "--retriever", "feature",
         "--model", "out/scorer.json", "--k", "3", "--output", "out/finetune_test.jsonl"],
        rundir,
    )
    # predictions file: first dev target per entry, evaluated against dev refs
    preds = []
    with open(fx / "commongen_dev.jsonl") as fh:
        for line in fh:
            row = json.loads(line)
            preds.append({"concepts": row["concepts"], "prediction": row["targets"][0]})
    with open(rundir / "out" / "preds.jsonl", "w") as fh:
        for row in preds:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    cli(
        ["evaluate", "--predictions", "out/preds.jsonl", "--references", "fixtures/commongen_dev.jsonl",
         "--per-instance", "--output", "out/report.json"],
        rundir,
    )

    produced = sorted(p.relative_to(rundir) for p in (rundir / "out").rglob("*") if p.is_file())
    produced += sorted(p.relative_to(rundir) for p in (rundir / "store").rglob("*") if p.is_file())
    return produced
