"""Wiring the neural scorer into the pipeline over the wire protocol.

Drives both command-line tools the way a user would: build pairs with the
pipeline, train the adapter's cross-encoder on them, then let the
pipeline's retriever call the served scorer for ranking. Requires the
adapter package: pip install -e adapter
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

if shutil.which("neural-adapter") is None:
    sys.exit("neural-adapter is not installed; run: pip install -e adapter --no-build-isolation")

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"
work = Path(tempfile.mkdtemp(prefix="neural_demo_"))
fx = work / "fx"
shutil.copytree(FIXTURES, fx)


def run(*args, quiet=False):
    proc = subprocess.run(list(args), cwd=work, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"command failed: {args}\n{proc.stderr}")
    if not quiet and proc.stdout.strip():
        print(f"  {proc.stdout.strip().splitlines()[-1]}")
    return proc


print("building store and index ...")
run("protoret", "ingest", "--store", "store", "--input", "fx/external_captions.txt", "--source", "captions")
run("protoret", "ingest", "--store", "store", "--input", "fx/external_activity.txt", "--source", "activity")
run("protoret", "exclude-targets", "--store", "store",
    "--commongen", "fx/commongen_train.jsonl", "fx/commongen_test.jsonl")
run("protoret", "build-index", "--store", "store", "--output", "index.json")

print("training the cross-encoder on pipeline pairs ...")
run("protoret", "build-pairs", "--commongen", "fx/commongen_train.jsonl", "--seed", "2",
    "--neg-per-pos", "4", "--output", "pairs.jsonl")
run("neural-adapter", "train-scorer", "--pairs", "pairs.jsonl", "--output", "scorer_ckpt",
    "--epochs", "30", "--learning-rate", "5e-4", "--batch-size", "32", "--seed", "2")

print("retrieving with the served neural scorer ...")
proc = run("protoret", "retrieve", "--store", "store", "--index", "index.json",
           "--concepts", "dog,ball,park,catch", "--k", "3",
           "--retriever", "external", "--connect", "neural-adapter serve --checkpoint scorer_ckpt",
           quiet=True)
payload = json.loads(proc.stdout)
for p in payload["prototypes"]:
    print(f"  {p['score']:.3f}  {p['text']}")

print("\nbuilding a fine-tuning split through the neural scorer and training the generator ...")
run("protoret", "build-finetune", "--store", "store", "--index", "index.json",
    "--commongen", "fx/commongen_dev.jsonl", "--retriever", "external",
    "--connect", "neural-adapter serve --checkpoint scorer_ckpt", "--output", "ft_dev.jsonl")
run("neural-adapter", "train-generator", "--examples", "ft_dev.jsonl", "--output", "gen_ckpt",
    "--epochs", "3", "--learning-rate", "3e-4", "--batch-size", "8")
proc = run("neural-adapter", "generate", "--checkpoint", "gen_ckpt",
           "--input", "dog catch <sep> a dog catches a ball", quiet=True)
print(f"  toy generator output: {proc.stdout.strip()!r}")
print(f"\nartifacts left in {work}")
