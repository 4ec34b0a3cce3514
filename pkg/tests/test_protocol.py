"""Client-side tests of the external scorer wire protocol."""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from protoret.concept_index import CandidateSet
from protoret.corpus import ConceptSet
from protoret.errors import ScorerProtocolError
from protoret.retrieval import EXTERNAL, ExternalScorerClient, RankingRetriever, rank_retrieve

from support import make_store

MOCK = Path(__file__).resolve().parent / "mock_scorer.py"


def stdio_client(*args, **kwargs):
    return ExternalScorerClient.stdio([sys.executable, str(MOCK), *args], **kwargs)


@pytest.fixture
def overlap_store():
    return make_store(
        [
            "the dog chases the ball in the park .",
            "a dog sleeps .",
            "nothing relevant here .",
            "dog ball dog ball .",
        ]
    )


def test_ping_on_connect():
    client = stdio_client()
    client.close()


def test_mute_ping_aborts():
    with pytest.raises(ScorerProtocolError, match="no response"):
        stdio_client("--mute-ping", timeout=0.5)


def test_scores_match_server_rule(overlap_store):
    cs = ConceptSet(("dog", "ball"))
    with stdio_client() as client:
        records = list(overlap_store)
        scores = client.score_batch(cs, records)
    assert scores[0] == 1.0  # both words present
    assert scores[1] == 0.5
    assert scores[2] == 0.0
    assert scores[3] == 1.0


def test_out_of_order_responses_handled(overlap_store):
    cs = ConceptSet(("dog", "ball"))
    with stdio_client("--reorder") as client:
        scores = client.score_batch(cs, list(overlap_store))
    assert scores == [1.0, 0.5, 0.0, 1.0]


def test_dropped_response_times_out(overlap_store):
    cs = ConceptSet(("dog", "ball"))
    with pytest.raises(ScorerProtocolError, match="no response"):
        # request ids start at 1; drop the second scoring request
        with stdio_client("--drop-id", "2", timeout=0.5) as client:
            client.score_batch(cs, list(overlap_store))


def test_cache_avoids_requeries(overlap_store):
    cs = ConceptSet(("dog", "ball"))
    with stdio_client() as client:
        first = client.score_batch(cs, list(overlap_store))
        before = client._next_id
        second = client.score_batch(cs, list(overlap_store))
        assert client._next_id == before  # no new requests issued
    assert first == second


def test_rank_retrieve_through_external_scorer(overlap_store):
    cs = ConceptSet(("dog", "ball"))
    entries = [(r.id, 1) for r in overlap_store]
    cands = CandidateSet(concept_set=cs, entries=entries)
    with stdio_client() as client:
        retriever = RankingRetriever(overlap_store, client, label=EXTERNAL)
        protos = retriever.retrieve(cands, k=2)
    assert protos.retriever == EXTERNAL
    # ids 0 and 3 both score 1.0; equal match counts, so lower id first
    assert protos.ids() == [0, 3]


def test_tcp_transport(overlap_store):
    proc = subprocess.Popen(
        [sys.executable, str(MOCK), "--tcp", "0"], stdout=subprocess.PIPE, text=True
    )
    try:
        line = proc.stdout.readline()
        port = int(line.split()[-1])
        cs = ConceptSet(("dog", "ball"))
        with ExternalScorerClient.tcp("127.0.0.1", port) as client:
            scores = client.score_batch(cs, list(overlap_store))
        assert scores == [1.0, 0.5, 0.0, 1.0]
    finally:
        proc.terminate()
        proc.wait(timeout=5)


def test_batching_windows(overlap_store):
    # batch_size 1 forces one round trip per record and must still agree
    cs = ConceptSet(("dog", "ball"))
    with stdio_client(batch_size=1) as client:
        scores = client.score_batch(cs, list(overlap_store))
    assert scores == [1.0, 0.5, 0.0, 1.0]
