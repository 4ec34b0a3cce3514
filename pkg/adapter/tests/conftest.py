import pytest

from toydata import toy_examples, toy_pairs, write_jsonl


@pytest.fixture(scope="session")
def pairs_file(tmp_path_factory):
    return write_jsonl(tmp_path_factory.mktemp("data") / "pairs.jsonl", toy_pairs(1000, seed=0))


@pytest.fixture(scope="session")
def examples_file(tmp_path_factory):
    return write_jsonl(tmp_path_factory.mktemp("data") / "examples.jsonl", toy_examples(100, seed=0))


@pytest.fixture(scope="session")
def scorer_checkpoint(tmp_path_factory, pairs_file):
    """A trained scorer shared by the server tests."""
    from neural_adapter.scorer import train_neural_scorer

    out = tmp_path_factory.mktemp("ckpt") / "scorer"
    train_neural_scorer(pairs_file, out, epochs=4, learning_rate=3e-4, batch_size=32, seed=0)
    return out
