"""Prototype sentence selection.

Two retrieval strategies over a candidate set: the matching retriever fills
top-down by shared-concept count (sampling only inside the boundary count
group), and ranking retrieval orders candidates by a scorer. The built-in
scorer is a logistic model over hand features trained on positive/negative
concept-sentence pairs; an external neural scorer can be plugged in over a
line-delimited JSON protocol.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import select
import socket
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .concept_index import CandidateSet
from .corpus import ConceptSet, SentenceRecord, SentenceStore, Split
from .errors import ConfigError, DataError, ScorerProtocolError
from .textnorm import LemmaLexicon, analyze, default_lexicon

FEATURE_NAMES = (
    "concept_coverage",
    "match_count",
    "candidate_len_tokens",
    "inverse_length",
    "jaccard",
    "all_concepts_flag",
)

MATCHING = "MATCHING"
FEATURE = "FEATURE"
EXTERNAL = "EXTERNAL"


@dataclass(frozen=True)
class Prototype:
    sentence_id: int
    text: str
    score: float


@dataclass
class PrototypeList:
    prototypes: list[Prototype]
    k: int
    retriever: str
    short: bool = False  # fewer than k available

    def __len__(self):
        return len(self.prototypes)

    def ids(self):
        return [p.sentence_id for p in self.prototypes]

    def texts(self):
        return [p.text for p in self.prototypes]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "retriever": self.retriever,
            "short": self.short,
            "prototypes": [
                {"id": p.sentence_id, "text": p.text, "score": p.score} for p in self.prototypes
            ],
        }


@dataclass(frozen=True)
class TrainingPair:
    concept_set: ConceptSet
    sentence_text: str
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise DataError(f"label must be 0 or 1, got {self.label}")
        if not self.sentence_text:
            raise DataError("training pair sentence must be non-empty")


# ---- matching retriever ----------------------------------------------------


def matching_retrieve(cands: CandidateSet, k: int, seed: int, store: SentenceStore) -> PrototypeList:
    """Fill k slots from the highest match-count group downward.

    Only the boundary group (the one that does not fit entirely) is
    sampled, uniformly without replacement; full groups are taken whole in
    id order. Deterministic given (cands, k, seed).
    """
    if k < 0:
        raise ConfigError("k must be >= 0")
    groups: dict[int, list[int]] = {}
    for sid, count in cands.entries:
        groups.setdefault(count, []).append(sid)

    chosen: list[tuple[int, int]] = []  # (sid, count)
    remaining = k
    for count in sorted(groups, reverse=True):
        if remaining <= 0:
            break
        members = sorted(groups[count])
        if len(members) <= remaining:
            take = members
        else:
            take = sorted(random.Random(seed).sample(members, remaining))
        chosen.extend((sid, count) for sid in take)
        remaining -= len(take)

    prototypes = [Prototype(sid, store.get(sid).text, float(count)) for sid, count in chosen]
    return PrototypeList(prototypes=prototypes, k=k, retriever=MATCHING, short=len(prototypes) < k)


# ---- feature scorer ---------------------------------------------------------


@dataclass(frozen=True)
class FeatureVector:
    concept_coverage: float
    match_count: float
    candidate_len_tokens: float
    inverse_length: float
    jaccard: float
    all_concepts_flag: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)


def extract_features(concepts: ConceptSet, record: SentenceRecord) -> FeatureVector:
    cset = set(concepts.concepts)
    lemmas = record.lemma_set
    matched = len(cset & lemmas)
    coverage = matched / len(cset)
    n_tokens = len(record.tokens)
    union = len(cset | lemmas)
    return FeatureVector(
        concept_coverage=coverage,
        match_count=float(matched),
        candidate_len_tokens=float(n_tokens),
        inverse_length=1.0 / n_tokens if n_tokens else 0.0,
        jaccard=matched / union if union else 0.0,
        all_concepts_flag=1.0 if matched == len(cset) else 0.0,
    )


@dataclass
class ScorerModel:
    feature_names: tuple[str, ...]
    weights: np.ndarray
    bias: float
    training_meta: dict = field(default_factory=dict)

    def logit(self, features: FeatureVector) -> float:
        return float(self.weights @ features.to_array() + self.bias)

    def save(self, path):
        payload = {
            "feature_names": list(self.feature_names),
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "training_meta": self.training_meta,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "ScorerModel":
        try:
            payload = json.loads(Path(path).read_text())
        except OSError as exc:
            raise DataError(f"cannot read scorer model {path}: {exc}") from exc
        return cls(
            feature_names=tuple(payload["feature_names"]),
            weights=np.array(payload["weights"], dtype=float),
            bias=float(payload["bias"]),
            training_meta=payload.get("training_meta", {}),
        )


def score(model: ScorerModel, concepts: ConceptSet, record: SentenceRecord) -> float:
    """Sigmoid of the linear feature score; always in (0, 1)."""
    if tuple(model.feature_names) != FEATURE_NAMES:
        raise ConfigError(
            f"scorer model features {model.feature_names} do not match extractor features {FEATURE_NAMES}"
        )
    return _sigmoid(model.logit(extract_features(concepts, record)))


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def bce_loss_and_grad(weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray):
    """Mean binary cross-entropy and its analytic gradient."""
    z = X @ weights + bias
    p = _sigmoid(z)
    eps = 1e-12
    loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
    diff = p - y
    grad_w = X.T @ diff / len(y)
    grad_b = float(np.mean(diff))
    return loss, grad_w, grad_b


def build_pairs(entries, neg_per_pos: int = 1, seed: int = 0) -> list[TrainingPair]:
    """One positive per (concept set, target) plus sampled cross-entry negatives.

    Negatives for an entry are drawn uniformly from the targets of *other*
    entries and never coincide with any of the entry's own targets.
    """
    if neg_per_pos < 0:
        raise ConfigError("neg_per_pos must be >= 0")
    entries = list(entries)
    if len(entries) < 2 and neg_per_pos > 0:
        raise DataError("need at least two entries to sample negative pairs")
    all_targets = [(i, t) for i, e in enumerate(entries) for t in e.targets]
    rng = random.Random(seed)
    pairs: list[TrainingPair] = []
    for i, entry in enumerate(entries):
        own = set(entry.targets)
        for target in entry.targets:
            pairs.append(TrainingPair(entry.concept_set, target, 1))
            need = neg_per_pos
            guard = 0
            while need > 0:
                j, neg = all_targets[rng.randrange(len(all_targets))]
                guard += 1
                if j == i or neg in own:
                    if guard > 1000 * (neg_per_pos + 1):
                        raise DataError("cannot sample negatives: too few distinct targets")
                    continue
                pairs.append(TrainingPair(entry.concept_set, neg, 0))
                need -= 1
    return pairs


@dataclass
class ScorerTrainConfig:
    epochs: int = 200
    learning_rate: float = 0.5
    seed: int = 0


def featurize_pairs(pairs, lexicon: LemmaLexicon | None = None):
    """Feature matrix and label vector for a pair list."""
    lexicon = lexicon or default_lexicon()
    X = np.empty((len(pairs), len(FEATURE_NAMES)), dtype=float)
    y = np.empty(len(pairs), dtype=float)
    for i, pair in enumerate(pairs):
        record = ephemeral_record(pair.sentence_text, lexicon)
        X[i] = extract_features(pair.concept_set, record).to_array()
        y[i] = pair.label
    return X, y


def ephemeral_record(text: str, lexicon: LemmaLexicon | None = None) -> SentenceRecord:
    """A throwaway record for scoring raw text outside any store."""
    return SentenceRecord(id=0, text=text, tokens=tuple(analyze(text, lexicon)), source="adhoc", split=Split.EXTERNAL)


def train_scorer(pairs, config: ScorerTrainConfig | None = None,
                 lexicon: LemmaLexicon | None = None) -> ScorerModel:
    """Full-batch gradient descent on binary cross-entropy from zero init."""
    config = config or ScorerTrainConfig()
    labels = {p.label for p in pairs}
    if labels != {0, 1}:
        raise DataError("training pairs must contain both positive and negative labels")
    X, y = featurize_pairs(pairs, lexicon)
    weights = np.zeros(len(FEATURE_NAMES))
    bias = 0.0
    trace = []
    for _ in range(config.epochs):
        _, grad_w, grad_b = bce_loss_and_grad(weights, bias, X, y)
        weights = weights - config.learning_rate * grad_w
        bias = bias - config.learning_rate * grad_b
        loss, _, _ = bce_loss_and_grad(weights, bias, X, y)
        trace.append(loss)
    meta = {
        "seed": config.seed,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "n_pairs": len(pairs),
        "loss_trace": trace,
    }
    return ScorerModel(feature_names=FEATURE_NAMES, weights=weights, bias=bias, training_meta=meta)


class FeatureScorer:
    """Callable (concepts, record) -> probability, backed by a ScorerModel."""

    def __init__(self, model: ScorerModel, lexicon: LemmaLexicon | None = None):
        if tuple(model.feature_names) != FEATURE_NAMES:
            raise ConfigError("scorer model feature names do not match the feature extractor")
        self.model = model
        self.lexicon = lexicon or default_lexicon()

    def __call__(self, concepts: ConceptSet, record: SentenceRecord) -> float:
        return score(self.model, concepts, record)


# ---- ranking retrieval -------------------------------------------------------


def rank_retrieve(scorer, cands: CandidateSet, k: int, store: SentenceStore,
                  label: str = FEATURE) -> PrototypeList:
    """Top-k candidates by score, ties by (match_count desc, id asc).

    Any scorer failure aborts the whole retrieval, naming the offending
    sentence id; there are no silent partial results.
    """
    if k < 0:
        raise ConfigError("k must be >= 0")
    scored = []
    for sid, count in cands.entries:
        record = store.get(sid)
        try:
            s = float(scorer(cands.concept_set, record))
        except Exception as exc:
            raise ScorerProtocolError(f"scorer failed on sentence id {sid}: {exc}") from exc
        scored.append((sid, count, s))
    scored.sort(key=lambda t: (-t[2], -t[1], t[0]))
    top = scored[:k]
    prototypes = [Prototype(sid, store.get(sid).text, s) for sid, _, s in top]
    return PrototypeList(prototypes=prototypes, k=k, retriever=label, short=len(prototypes) < k)


# ---- external scorer over the wire protocol ----------------------------------


def concept_key(concepts: ConceptSet) -> str:
    return hashlib.sha1("\x1f".join(concepts.concepts).encode()).hexdigest()


class _LineChannel:
    """select()-driven line reads over a raw fd or socket.

    Buffered readline() cannot be mixed with select(): bytes parked in the
    Python-level buffer make the fd look idle. So reads go through os.read /
    recv with an explicit buffer.
    """

    def __init__(self):
        self._buf = b""

    def _recv(self, max_bytes: int) -> bytes:
        raise NotImplementedError

    def _selectable(self):
        raise NotImplementedError

    def read_line(self, timeout: float) -> str:
        deadline = time.monotonic() + timeout
        while True:
            nl = self._buf.find(b"\n")
            if nl >= 0:
                line, self._buf = self._buf[:nl], self._buf[nl + 1 :]
                return line.decode("utf-8")
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ScorerProtocolError(f"no response from scorer within {timeout}s")
            ready, _, _ = select.select([self._selectable()], [], [], remaining)
            if not ready:
                raise ScorerProtocolError(f"no response from scorer within {timeout}s")
            data = self._recv(65536)
            if not data:
                raise ScorerProtocolError("scorer closed the connection")
            self._buf += data


class _StdioTransport(_LineChannel):
    def __init__(self, command):
        super().__init__()
        self.proc = subprocess.Popen(
            command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, bufsize=0
        )

    def send_line(self, line: str):
        if self.proc.poll() is not None:
            raise ScorerProtocolError("scorer process exited")
        self.proc.stdin.write(line.encode("utf-8") + b"\n")
        self.proc.stdin.flush()

    def _recv(self, max_bytes):
        return os.read(self.proc.stdout.fileno(), max_bytes)

    def _selectable(self):
        return self.proc.stdout

    def close(self):
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()


class _TcpTransport(_LineChannel):
    def __init__(self, host, port):
        super().__init__()
        try:
            self.sock = socket.create_connection((host, port), timeout=10)
        except OSError as exc:
            raise ScorerProtocolError(f"cannot connect to scorer at {host}:{port}: {exc}") from exc
        self.sock.setblocking(False)

    def send_line(self, line: str):
        self.sock.setblocking(True)
        try:
            self.sock.sendall(line.encode("utf-8") + b"\n")
        finally:
            self.sock.setblocking(False)

    def _recv(self, max_bytes):
        return self.sock.recv(max_bytes)

    def _selectable(self):
        return self.sock

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


class ExternalScorerClient:
    """Client side of the scorer wire protocol.

    Requests are line-delimited JSON `{"id", "concepts", "sentence"}`;
    responses `{"id", "score"}` may arrive in any order. Request id 0 is
    reserved for the liveness ping. Scores are cached per (concept-set
    hash, sentence id) because pre-training-scale retrieval re-queries the
    same pairs heavily.
    """

    def __init__(self, transport, timeout: float = 10.0, batch_size: int = 64, ping: bool = True):
        self.transport = transport
        self.timeout = timeout
        self.batch_size = max(1, batch_size)
        self._next_id = 1
        self._cache: dict[tuple[str, int], float] = {}
        if ping:
            self.ping()

    @classmethod
    def stdio(cls, command, **kwargs) -> "ExternalScorerClient":
        return cls(_StdioTransport(command), **kwargs)

    @classmethod
    def tcp(cls, host, port, **kwargs) -> "ExternalScorerClient":
        return cls(_TcpTransport(host, port), **kwargs)

    def ping(self):
        self.transport.send_line(json.dumps({"id": 0, "ping": True}))
        reply = self._read_json()
        if reply.get("id") != 0:
            raise ScorerProtocolError(f"ping answered with wrong id: {reply!r}")

    def _read_json(self) -> dict:
        line = self.transport.read_line(self.timeout).strip()
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScorerProtocolError(f"scorer sent invalid JSON: {line!r}") from exc
        if not isinstance(msg, dict):
            raise ScorerProtocolError(f"scorer sent non-object message: {line!r}")
        return msg

    def score_batch(self, concepts: ConceptSet, records) -> list[float]:
        """Score records against one concept set, consulting the cache."""
        ckey = concept_key(concepts)
        missing = [r for r in records if (ckey, r.id) not in self._cache]
        for chunk_start in range(0, len(missing), self.batch_size):
            chunk = missing[chunk_start : chunk_start + self.batch_size]
            pending: dict[int, int] = {}
            for rec in chunk:
                req_id = self._next_id
                self._next_id += 1
                pending[req_id] = rec.id
                self.transport.send_line(
                    json.dumps({"id": req_id, "concepts": list(concepts.concepts), "sentence": rec.text})
                )
            while pending:
                msg = self._read_json()
                if "error" in msg:
                    raise ScorerProtocolError(f"scorer reported error: {msg['error']}")
                rid = msg.get("id")
                if rid not in pending:
                    raise ScorerProtocolError(f"scorer answered unknown request id {rid!r}")
                value = msg.get("score")
                if not isinstance(value, (int, float)) or not (0.0 <= float(value) <= 1.0):
                    raise ScorerProtocolError(f"scorer returned out-of-range score {value!r}")
                self._cache[(ckey, pending.pop(rid))] = float(value)
        return [self._cache[(ckey, r.id)] for r in records]

    def __call__(self, concepts: ConceptSet, record: SentenceRecord) -> float:
        return self.score_batch(concepts, [record])[0]

    def close(self):
        self.transport.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# ---- retriever facade used by the dataset builder and CLI --------------------


class MatchingRetriever:
    def __init__(self, store: SentenceStore, seed: int = 0):
        self.store = store
        self.seed = seed

    def retrieve(self, cands: CandidateSet, k: int) -> PrototypeList:
        return matching_retrieve(cands, k, self.seed, self.store)


class RankingRetriever:
    def __init__(self, store: SentenceStore, scorer, label: str = FEATURE):
        self.store = store
        self.scorer = scorer
        self.label = label

    def retrieve(self, cands: CandidateSet, k: int) -> PrototypeList:
        if isinstance(self.scorer, ExternalScorerClient):
            # one batched round-trip instead of per-candidate calls
            records = [self.store.get(sid) for sid, _ in cands.entries]
            self.scorer.score_batch(cands.concept_set, records)
        return rank_retrieve(self.scorer, cands, k, self.store, label=self.label)
