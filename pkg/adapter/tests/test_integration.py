"""End-to-end interop with the primary pipeline over its external surfaces:
file formats in, wire protocol back. The adapter process is driven by the
pipeline CLI exactly as a user would wire it.
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[2] / "data" / "fixtures"

pytestmark = pytest.mark.skipif(
    shutil.which("protoret") is None or not FIXTURES.exists(),
    reason="primary pipeline CLI or its fixtures not installed",
)


def run(args, cwd):
    proc = subprocess.run(args, cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, f"{args} -> {proc.returncode}\n{proc.stderr}\n{proc.stdout}"
    return proc


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    """Store, index, pairs, and a trained neural scorer over the fixtures."""
    root = tmp_path_factory.mktemp("interop")
    fx = root / "fx"
    shutil.copytree(FIXTURES, fx)
    run(["protoret", "ingest", "--store", "store", "--input", "fx/external_captions.txt",
         "--source", "captions"], root)
    run(["protoret", "ingest", "--store", "store", "--input", "fx/external_activity.txt",
         "--source", "activity"], root)
    run(["protoret", "exclude-targets", "--store", "store",
         "--commongen", "fx/commongen_train.jsonl", "fx/commongen_test.jsonl"], root)
    run(["protoret", "build-index", "--store", "store", "--output", "index.json"], root)
    run(["protoret", "build-pairs", "--commongen", "fx/commongen_train.jsonl",
         "--neg-per-pos", "1", "--seed", "2", "--output", "pairs.jsonl"], root)
    run([sys.executable, "-m", "neural_adapter", "train-scorer", "--pairs", "pairs.jsonl",
         "--output", "scorer_ckpt", "--epochs", "4", "--learning-rate", "3e-4",
         "--batch-size", "32", "--seed", "2"], root)
    return root


def serve_cmd(root):
    return f"{sys.executable} -m neural_adapter serve --checkpoint {root / 'scorer_ckpt'}"


class TestPipelineWithNeuralScorer:
    def test_retrieve_through_adapter(self, world):
        proc = run(["protoret", "retrieve", "--store", "store", "--index", "index.json",
                    "--concepts", "dog,ball,park,catch", "--k", "3",
                    "--retriever", "external", "--connect", serve_cmd(world)], world)
        payload = json.loads(proc.stdout)
        assert payload["retriever"] == "EXTERNAL"
        assert 0 < len(payload["prototypes"]) <= 3
        assert all(0.0 <= p["score"] <= 1.0 for p in payload["prototypes"])

    def test_build_finetune_through_adapter(self, world):
        run(["protoret", "build-finetune", "--store", "store", "--index", "index.json",
             "--commongen", "fx/commongen_dev.jsonl", "--retriever", "external",
             "--connect", serve_cmd(world), "--k", "2", "--output", "ft_dev.jsonl"], world)
        rows = [json.loads(l) for l in (world / "ft_dev.jsonl").read_text().splitlines()]
        assert rows
        stats = json.loads((world / "ft_dev.stats.json").read_text())
        assert stats["fallback_used"] is False
        assert stats["emitted"] == len(rows)

    def test_generator_trains_on_pipeline_output(self, world):
        run([sys.executable, "-m", "neural_adapter", "train-generator",
             "--examples", "ft_dev.jsonl", "--output", "gen_ckpt",
             "--epochs", "3", "--learning-rate", "3e-4", "--batch-size", "8", "--seed", "0"], world)
        losses = [json.loads(l)["loss"] for l in (world / "gen_ckpt" / "loss_log.jsonl").read_text().splitlines()]
        assert losses[0] > losses[-1]
        proc = run([sys.executable, "-m", "neural_adapter", "generate", "--checkpoint", "gen_ckpt",
                    "--input", "dog catch <sep> a dog catches a ball"], world)
        assert proc.stdout.strip()
