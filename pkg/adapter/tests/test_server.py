import json
import socket
import subprocess
import sys
import threading
import time

import pytest
from jsonschema import validate

from neural_adapter.server import ScorerService

REQUEST_SCHEMA = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "id": {"type": "integer", "minimum": 0},
                "concepts": {"type": "array", "items": {"type": "string"}},
                "sentence": {"type": "string"},
            },
            "required": ["id", "concepts", "sentence"],
        },
        {
            "properties": {"id": {"const": 0}, "ping": {"const": True}},
            "required": ["id", "ping"],
        },
    ],
}

RESPONSE_SCHEMA = {
    "type": "object",
    "properties": {
        "id": {"type": "integer", "minimum": 0},
        "score": {"type": "number", "minimum": 0.0, "maximum": 1.0},
        "ok": {"type": "boolean"},
        "error": {"type": "string"},
    },
    "required": ["id"],
    "anyOf": [{"required": ["score"]}, {"required": ["ok"]}, {"required": ["error"]}],
}


@pytest.fixture(scope="module")
def service(scorer_checkpoint):
    return ScorerService(scorer_checkpoint)


class TestHandleLines:
    def test_ping_answered(self, service):
        out = service.handle_lines([json.dumps({"id": 0, "ping": True})])
        assert len(out) == 1
        reply = json.loads(out[0])
        assert reply["id"] == 0 and reply["ok"] is True

    def test_score_in_range(self, service):
        req = {"id": 7, "concepts": ["dog", "ball"], "sentence": "the dog ball ."}
        reply = json.loads(service.handle_lines([json.dumps(req)])[0])
        assert reply["id"] == 7
        assert 0.0 <= reply["score"] <= 1.0

    def test_malformed_line_error_response_and_server_survives(self, service):
        out = service.handle_lines(["this is not json"])
        reply = json.loads(out[0])
        assert "error" in reply
        # server still answers afterwards
        req = {"id": 9, "concepts": ["dog"], "sentence": "a dog ."}
        assert json.loads(service.handle_lines([json.dumps(req)])[0])["id"] == 9

    def test_missing_fields_error_names_id(self, service):
        reply = json.loads(service.handle_lines([json.dumps({"id": 4, "concepts": "dog"})])[0])
        assert reply["id"] == 4
        assert "error" in reply

    def test_batch_of_mixed_lines(self, service):
        lines = [
            json.dumps({"id": 0, "ping": True}),
            "garbage",
            json.dumps({"id": 1, "concepts": ["dog"], "sentence": "a dog ."}),
            json.dumps({"id": 2, "concepts": ["cat"], "sentence": "a cat ."}),
        ]
        out = [json.loads(r) for r in service.handle_lines(lines)]
        assert len(out) == 4
        assert {r["id"] for r in out if "score" in r} == {1, 2}


def stdio_server(checkpoint):
    return subprocess.Popen(
        [sys.executable, "-m", "neural_adapter", "serve", "--checkpoint", str(checkpoint)],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
        bufsize=1,
    )


class TestStdioTransport:
    def test_transcript_conforms_to_schema(self, scorer_checkpoint):
        proc = stdio_server(scorer_checkpoint)
        transcript = []
        try:
            requests = [
                {"id": 0, "ping": True},
                {"id": 1, "concepts": ["dog", "ball"], "sentence": "the dog chases the ball ."},
                {"id": 2, "concepts": ["lake"], "sentence": "a lamp on the table ."},
                {"id": 3, "concepts": ["canoe", "lake"], "sentence": "a canoe floats on the lake ."},
            ]
            for req in requests:
                line = json.dumps(req)
                proc.stdin.write(line + "\n")
                proc.stdin.flush()
                transcript.append(("request", line))
                resp = proc.stdout.readline().strip()
                transcript.append(("response", resp))
        finally:
            proc.terminate()
            proc.wait(timeout=10)

        ids_seen = set()
        for direction, line in transcript:
            payload = json.loads(line)
            validate(payload, REQUEST_SCHEMA if direction == "request" else RESPONSE_SCHEMA)
            if direction == "response":
                ids_seen.add(payload["id"])
        assert ids_seen == {0, 1, 2, 3}

    def test_ping_answered_within_timeout(self, scorer_checkpoint):
        proc = stdio_server(scorer_checkpoint)
        try:
            start = time.monotonic()
            proc.stdin.write(json.dumps({"id": 0, "ping": True}) + "\n")
            proc.stdin.flush()
            reply = json.loads(proc.stdout.readline())
            assert reply == {"id": 0, "ok": True}
            assert time.monotonic() - start < 10
        finally:
            proc.terminate()
            proc.wait(timeout=10)


def tcp_server(checkpoint):
    proc = subprocess.Popen(
        [sys.executable, "-m", "neural_adapter", "serve", "--checkpoint", str(checkpoint), "--tcp", "0"],
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
    )
    port = int(proc.stdout.readline().split()[-1])
    return proc, port


class TestTcpTransport:
    def test_load_1000_requests_zero_dropped(self, scorer_checkpoint):
        proc, port = tcp_server(scorer_checkpoint)
        results: dict[int, float] = {}
        errors = []
        lock = threading.Lock()

        def worker(worker_id, n_requests):
            try:
                sock = socket.create_connection(("127.0.0.1", port), timeout=30)
                reader = sock.makefile("r", encoding="utf-8")
                ids = [worker_id * 10_000 + i + 1 for i in range(n_requests)]
                with sock.makefile("w", encoding="utf-8") as writer:
                    for rid in ids:
                        writer.write(json.dumps({
                            "id": rid,
                            "concepts": ["dog", "ball"],
                            "sentence": f"sentence number {rid} with a dog .",
                        }) + "\n")
                    writer.flush()
                    got = {}
                    while len(got) < n_requests:
                        reply = json.loads(reader.readline())
                        got[reply["id"]] = reply["score"]
                    assert set(got) == set(ids)
                    with lock:
                        results.update(got)
                sock.close()
            except Exception as exc:  # surface failures to the main thread
                with lock:
                    errors.append(exc)

        threads = [threading.Thread(target=worker, args=(w, 125)) for w in range(8)]
        try:
            for t in threads:
                t.start()
            for t in threads:
                t.join(timeout=120)
        finally:
            proc.terminate()
            proc.wait(timeout=10)
        assert not errors, errors
        assert len(results) == 1000
        assert all(0.0 <= s <= 1.0 for s in results.values())

    def test_concurrent_connections_isolated(self, scorer_checkpoint):
        proc, port = tcp_server(scorer_checkpoint)
        try:
            socks = [socket.create_connection(("127.0.0.1", port), timeout=10) for _ in range(3)]
            readers = [s.makefile("r", encoding="utf-8") for s in socks]
            for i, s in enumerate(socks):
                s.sendall((json.dumps({"id": i + 1, "concepts": ["dog"], "sentence": "a dog ."}) + "\n").encode())
            for i, r in enumerate(readers):
                reply = json.loads(r.readline())
                assert reply["id"] == i + 1
            for s in socks:
                s.close()
        finally:
            proc.terminate()
            proc.wait(timeout=10)
