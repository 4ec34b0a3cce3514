"""Scorer server speaking the pipeline's wire protocol.

Line-delimited JSON requests `{"id", "concepts", "sentence"}` answered
with `{"id", "score"}`. `{"id": 0, "ping": true}` gets an immediate
`{"id": 0, "ok": true}`. Malformed lines produce an error response and
the server stays up. Requests that arrive together are scored as one
model batch, so responses can come back out of order relative to
interleaved connections; the client tolerates that by matching ids.

Two transports: stdio (one peer) and a select()-driven TCP loop that
serves any number of concurrent connections from one thread.
"""

from __future__ import annotations

import json
import os
import select
import socket
import sys

from .scorer import load_scorer, score_pairs_with

MAX_BATCH = 128


class ScorerService:
    def __init__(self, checkpoint_dir):
        self.vocab, self.model = load_scorer(checkpoint_dir)

    def handle_lines(self, lines) -> list[str]:
        """Process a drained batch of request lines into response lines."""
        responses: list[str | None] = []
        to_score: list[tuple[int, int, list, str]] = []  # (slot, rid, concepts, sentence)
        for line in lines:
            line = line.strip()
            if not line:
                continue
            slot = len(responses)
            responses.append(None)
            try:
                req = json.loads(line)
                if not isinstance(req, dict):
                    raise ValueError("request must be a JSON object")
            except (json.JSONDecodeError, ValueError) as exc:
                responses[slot] = json.dumps({"id": 0, "error": f"invalid request: {exc}"})
                continue
            rid = req.get("id")
            if req.get("ping"):
                responses[slot] = json.dumps({"id": rid if isinstance(rid, int) else 0, "ok": True})
                continue
            if not isinstance(rid, int) or rid < 0:
                responses[slot] = json.dumps({"id": 0, "error": "missing or invalid id"})
                continue
            concepts = req.get("concepts")
            sentence = req.get("sentence")
            if not isinstance(concepts, list) or not all(isinstance(c, str) for c in concepts) \
                    or not isinstance(sentence, str):
                responses[slot] = json.dumps({"id": rid, "error": "need 'concepts' [str...] and 'sentence' str"})
                continue
            to_score.append((slot, rid, concepts, sentence))

        for start in range(0, len(to_score), MAX_BATCH):
            chunk = to_score[start : start + MAX_BATCH]
            scores = score_pairs_with(self.model, self.vocab, [(c, s) for _, _, c, s in chunk])
            for (slot, rid, _, _), score in zip(chunk, scores):
                responses[slot] = json.dumps({"id": rid, "score": max(0.0, min(1.0, score))})
        return [r for r in responses if r is not None]


def serve_stdio(service: ScorerService):
    """Serve one peer over stdin/stdout until EOF."""
    buf = b""
    fd = sys.stdin.fileno()
    while True:
        data = os.read(fd, 65536)
        if not data:
            break
        buf += data
        # drain whatever else is already pending so it scores as one batch
        while select.select([fd], [], [], 0)[0]:
            more = os.read(fd, 65536)
            if not more:
                break
            buf += more
        lines = []
        while b"\n" in buf:
            line, buf = buf.split(b"\n", 1)
            lines.append(line.decode("utf-8"))
        for resp in service.handle_lines(lines):
            sys.stdout.write(resp + "\n")
        sys.stdout.flush()


def serve_tcp(service: ScorerService, host: str, port: int, announce=print):
    """select()-driven loop serving concurrent connections."""
    srv = socket.create_server((host, port))
    announce(f"listening {srv.getsockname()[1]}", flush=True)
    buffers: dict[socket.socket, bytes] = {}
    try:
        while True:
            ready, _, _ = select.select([srv, *buffers], [], [], 1.0)
            batch: list[tuple[socket.socket, str]] = []
            for sock in ready:
                if sock is srv:
                    conn, _ = srv.accept()
                    buffers[conn] = b""
                    continue
                try:
                    data = sock.recv(65536)
                except OSError:
                    data = b""
                if not data:
                    sock.close()
                    buffers.pop(sock, None)
                    continue
                buffers[sock] += data
                while b"\n" in buffers[sock]:
                    line, buffers[sock] = buffers[sock].split(b"\n", 1)
                    batch.append((sock, line.decode("utf-8")))
            if not batch:
                continue
            responses = service.handle_lines([line for _, line in batch])
            # handle_lines preserves arrival order for non-empty lines
            socks = [s for s, line in batch if line.strip()]
            for sock, resp in zip(socks, responses):
                try:
                    sock.sendall(resp.encode("utf-8") + b"\n")
                except OSError:
                    sock.close()
                    buffers.pop(sock, None)
    finally:
        srv.close()
