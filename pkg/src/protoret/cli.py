"""Command-line pipeline: ingest -> exclude-targets -> sample-pool ->
build-index -> (build-pairs, train-scorer) -> build-pretrain /
build-finetune -> evaluate, plus ad-hoc `retrieve`.

Options may come from a JSON config file (--config); explicit flags win.
Every file-producing command writes a `<output>.manifest.json` with the
merged config, seeds, and input checksums. Exit codes: 0 ok, 2 config
error, 3 data error, 4 scorer protocol error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import shlex
import sys
from pathlib import Path

from . import dataset_builder, metrics
from .concept_index import InvertedIndex
from .corpus import ConceptSet, SentenceStore, Split, exclude_targets, ingest_corpus, load_commongen, sample_pool
from .dataset_builder import BuildStats, ConceptVocabulary, build_finetune, build_pretrain, concept_set_keys
from .errors import ConfigError, DataError, ProtoretError, ScorerProtocolError
from .manifest import write_manifest
from .retrieval import (
    EXTERNAL,
    ExternalScorerClient,
    FeatureScorer,
    MatchingRetriever,
    RankingRetriever,
    ScorerModel,
    ScorerTrainConfig,
    build_pairs,
    train_scorer,
)

DEFAULTS = {
    "k": 3,
    "min_overlap": 2,
    "pool_size": 500_000,
    "seed": 0,
    "neg_per_pos": 1,
    "epochs": 200,
    "learning_rate": 0.5,
    "min_concepts": 3,
    "max_concepts": 7,
    "leakage_mode": "exact",
    "split": "external",
    "format": "text",
    "retriever": "feature",
    "timeout": 30.0,
}

_SPLITS = {
    "external": Split.EXTERNAL,
    "cg-train": Split.CG_TRAIN,
    "cg-dev": Split.CG_DEV,
    "cg-test": Split.CG_TEST,
}


@contextlib.contextmanager
def store_lock(store_dir):
    """One command at a time per store directory."""
    store_dir = Path(store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    lock = store_dir / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise DataError(f"store {store_dir} is locked by another command (remove {lock} if stale)") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        with contextlib.suppress(OSError):
            os.unlink(lock)


def merged_config(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(DEFAULTS)
    file_cfg = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            file_cfg = json.loads(Path(config_path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg.update({k.replace("-", "_"): v for k, v in file_cfg.items()})
    cfg.update({k: v for k, v in vars(args).items() if k not in ("func", "config") and v is not None})
    return cfg


def require(cfg: dict, *names):
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise ConfigError(f"missing required option(s): {', '.join('--' + n.replace('_', '-') for n in missing)}")


def load_store(cfg) -> SentenceStore:
    require(cfg, "store")
    return SentenceStore.load(cfg["store"])


def load_index(cfg, store: SentenceStore) -> InvertedIndex:
    require(cfg, "index")
    index = InvertedIndex.load(cfg["index"])
    if index.store_checksum and index.store_checksum != store.checksum():
        raise DataError("index was built from a different store (checksum mismatch); rebuild it")
    return index


def make_scorer_client(cfg) -> ExternalScorerClient:
    if cfg.get("connect"):
        return ExternalScorerClient.stdio(shlex.split(cfg["connect"]), timeout=float(cfg["timeout"]))
    if cfg.get("tcp"):
        host, _, port = cfg["tcp"].rpartition(":")
        if not host or not port.isdigit():
            raise ConfigError(f"--tcp expects HOST:PORT, got {cfg['tcp']!r}")
        return ExternalScorerClient.tcp(host, int(port), timeout=float(cfg["timeout"]))
    raise ConfigError("external retriever needs --connect COMMAND or --tcp HOST:PORT")


def make_retriever(cfg, store):
    choice = cfg["retriever"]
    if choice == "matching":
        return MatchingRetriever(store, seed=int(cfg["seed"])), None
    if choice == "feature":
        require(cfg, "model")
        scorer = FeatureScorer(ScorerModel.load(cfg["model"]))
        return RankingRetriever(store, scorer), None
    if choice == "external":
        client = make_scorer_client(cfg)
        return RankingRetriever(store, client, label=EXTERNAL), client
    raise ConfigError(f"unknown retriever {choice!r} (matching | feature | external)")


# ---- subcommands -----------------------------------------------------------


def cmd_ingest(args):
    cfg = merged_config(args)
    require(cfg, "store", "input", "source")
    with store_lock(cfg["store"]):
        store_dir = Path(cfg["store"])
        store = SentenceStore.load(store_dir) if (store_dir / "records.jsonl").exists() else SentenceStore()
        added = ingest_corpus(
            cfg["input"], cfg["source"], store, split=_SPLITS[cfg["split"]], fmt=cfg["format"]
        )
        store.save(store_dir)
    print(f"ingested {added} records from {cfg['input']} into {store_dir}")
    return 0


def cmd_exclude_targets(args):
    cfg = merged_config(args)
    require(cfg, "store", "commongen")
    with store_lock(cfg["store"]):
        store = load_store(cfg)
        entries = []
        for path in cfg["commongen"]:
            entries.extend(load_commongen(path))
        removed = exclude_targets(store, entries)
        store.seal()
        store.save(cfg["store"])
    print(f"excluded {removed} records matching {len(entries)} entries' targets; store sealed")
    return 0


def cmd_sample_pool(args):
    cfg = merged_config(args)
    require(cfg, "store", "output")
    with store_lock(cfg["store"]):
        store = load_store(cfg)
        size = int(cfg.get("size") or cfg["pool_size"])
        seed = int(cfg["seed"])
        ids = sample_pool(store, size, seed)
        per_source: dict[str, int] = {}
        for sid in ids:
            src = store.get(sid).source
            per_source[src] = per_source.get(src, 0) + 1
        payload = {
            "size": size,
            "seed": seed,
            "store_checksum": store.checksum(),
            "per_source": dict(sorted(per_source.items())),
            "ids": ids,
        }
        Path(cfg["output"]).write_text(json.dumps(payload, sort_keys=True) + "\n")
        store.record_seed("sample_pool", size=size, seed=seed)
        store.save(cfg["store"])
    write_manifest(cfg["output"], "sample-pool", cfg, [cfg["store"]])
    print(f"sampled {len(ids)} sentence ids into {cfg['output']}")
    return 0


def cmd_build_index(args):
    cfg = merged_config(args)
    require(cfg, "store", "output")
    with store_lock(cfg["store"]):
        store = load_store(cfg)
        index = InvertedIndex.build(store)
        index.save(cfg["output"])
    write_manifest(cfg["output"], "build-index", cfg, [cfg["store"]])
    print(f"indexed {index.doc_count} sentences, {len(index.postings)} lemmas -> {cfg['output']}")
    return 0


def cmd_retrieve(args):
    cfg = merged_config(args)
    require(cfg, "store", "index", "concepts")
    store = load_store(cfg)
    index = load_index(cfg, store)
    concepts = ConceptSet.from_words(cfg["concepts"].split(","))
    cands = index.candidates(concepts, min_overlap=int(cfg["min_overlap"]))
    retriever, client = make_retriever(cfg, store)
    try:
        protos = retriever.retrieve(cands, int(cfg["k"]))
    finally:
        if client is not None:
            client.close()
    payload = protos.to_json()
    payload["concepts"] = list(concepts.concepts)
    text = json.dumps(payload, indent=1, sort_keys=True)
    if cfg.get("output"):
        Path(cfg["output"]).write_text(text + "\n")
        write_manifest(cfg["output"], "retrieve", cfg, [cfg["store"], cfg["index"]])
    print(text)
    return 0


def cmd_build_pairs(args):
    cfg = merged_config(args)
    require(cfg, "commongen", "output")
    entries = load_commongen(cfg["commongen"])
    pairs = build_pairs(entries, neg_per_pos=int(cfg["neg_per_pos"]), seed=int(cfg["seed"]))
    with open(cfg["output"], "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(
                json.dumps(
                    {"concepts": list(p.concept_set.concepts), "sentence": p.sentence_text, "label": p.label},
                    sort_keys=True,
                )
                + "\n"
            )
    write_manifest(cfg["output"], "build-pairs", cfg, [cfg["commongen"]])
    n_pos = sum(1 for p in pairs if p.label == 1)
    print(f"wrote {len(pairs)} pairs ({n_pos} positive) to {cfg['output']}")
    return 0


def cmd_train_scorer(args):
    cfg = merged_config(args)
    require(cfg, "pairs", "output")
    from .retrieval import TrainingPair

    pairs = []
    pairs_path = Path(cfg["pairs"])
    try:
        lines = pairs_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read pairs file {pairs_path}: {exc}") from exc
    for line in lines:
        if not line.strip():
            continue
        row = json.loads(line)
        pairs.append(TrainingPair(ConceptSet(tuple(row["concepts"])), row["sentence"], int(row["label"])))
    config = ScorerTrainConfig(
        epochs=int(cfg["epochs"]), learning_rate=float(cfg["learning_rate"]), seed=int(cfg["seed"])
    )
    model = train_scorer(pairs, config)
    model.save(cfg["output"])
    write_manifest(cfg["output"], "train-scorer", cfg, [cfg["pairs"]])
    trace = model.training_meta["loss_trace"]
    print(f"trained scorer on {len(pairs)} pairs; loss {trace[0]:.4f} -> {trace[-1]:.4f}; saved {cfg['output']}")
    return 0


def cmd_build_pretrain(args):
    cfg = merged_config(args)
    require(cfg, "store", "index", "pool", "vocab", "commongen_test", "output")
    with store_lock(cfg["store"]):
        store = load_store(cfg)
        index = load_index(cfg, store)
        pool = json.loads(Path(cfg["pool"]).read_text())["ids"]
        vocab = ConceptVocabulary.from_file(cfg["vocab"])
        held_out = load_commongen(cfg["commongen_test"])
        if cfg.get("filter_dev") and cfg.get("commongen_dev"):
            held_out.extend(load_commongen(cfg["commongen_dev"]))
        tests = concept_set_keys(held_out)
        stats = BuildStats()
        examples = build_pretrain(
            pool,
            vocab,
            tests,
            index,
            store,
            k=int(cfg["k"]),
            min_concepts=int(cfg["min_concepts"]),
            max_concepts=int(cfg["max_concepts"]),
            seed=int(cfg["seed"]),
            min_overlap=int(cfg["min_overlap"]),
            leakage_mode=cfg["leakage_mode"],
            stats=stats,
        )
        n = dataset_builder.write_examples(examples, cfg["output"])
    stats_path = Path(cfg["output"]).with_suffix("").parent / (Path(cfg["output"]).stem + ".stats.json")
    stats_path.write_text(json.dumps(stats.to_json(), indent=1, sort_keys=True) + "\n")
    inputs = [cfg["store"], cfg["index"], cfg["pool"], cfg["vocab"], cfg["commongen_test"], cfg.get("commongen_dev")]
    write_manifest(cfg["output"], "build-pretrain", cfg, inputs)
    print(f"wrote {n} pre-training examples to {cfg['output']} (stats: {stats_path})")
    return 0


def cmd_build_finetune(args):
    cfg = merged_config(args)
    require(cfg, "store", "index", "commongen", "output")
    with store_lock(cfg["store"]):
        store = load_store(cfg)
        index = load_index(cfg, store)
        entries = load_commongen(cfg["commongen"])
        stats = BuildStats()

        def run(retriever):
            s = BuildStats()
            examples = list(
                build_finetune(entries, retriever, index, store, k=int(cfg["k"]),
                               min_overlap=int(cfg["min_overlap"]), stats=s)
            )
            return examples, s

        retriever, client = make_retriever(cfg, store)
        try:
            examples, stats = run(retriever)
        except ScorerProtocolError:
            if not cfg.get("fallback_matching"):
                raise
            examples, stats = run(MatchingRetriever(store, seed=int(cfg["seed"])))
            stats.fallback_used = True
        finally:
            if client is not None:
                client.close()
        n = dataset_builder.write_examples(iter(examples), cfg["output"])
    stats_path = Path(cfg["output"]).with_suffix("").parent / (Path(cfg["output"]).stem + ".stats.json")
    stats_path.write_text(json.dumps(stats.to_json(), indent=1, sort_keys=True) + "\n")
    write_manifest(cfg["output"], "build-finetune", cfg, [cfg["store"], cfg["index"], cfg["commongen"]])
    print(f"wrote {n} fine-tuning examples to {cfg['output']} (stats: {stats_path})")
    return 0


def cmd_evaluate(args):
    cfg = merged_config(args)
    require(cfg, "predictions", "references", "output")
    report = metrics.evaluate(cfg["predictions"], cfg["references"], per_instance=bool(cfg.get("per_instance")))
    report.save(cfg["output"])
    write_manifest(cfg["output"], "evaluate", cfg, [cfg["predictions"], cfg["references"]])
    print(
        f"bleu4={report.bleu4:.4f} rouge_l={report.rouge_l:.4f} "
        f"cider={report.cider:.4f} coverage={report.coverage:.4f} -> {cfg['output']}"
    )
    return 0


# ---- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="protoret", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, configure):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with default options")
        configure(p)
        p.set_defaults(func=func)
        return p

    def p_ingest(p):
        p.add_argument("--store")
        p.add_argument("--input")
        p.add_argument("--source")
        p.add_argument("--split", choices=sorted(_SPLITS))
        p.add_argument("--format", choices=["text", "tagged"])

    add("ingest", cmd_ingest, p_ingest)

    def p_exclude(p):
        p.add_argument("--store")
        p.add_argument("--commongen", nargs="+")

    add("exclude-targets", cmd_exclude_targets, p_exclude)

    def p_sample(p):
        p.add_argument("--store")
        p.add_argument("--size", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--output")

    add("sample-pool", cmd_sample_pool, p_sample)

    def p_index(p):
        p.add_argument("--store")
        p.add_argument("--output")

    add("build-index", cmd_build_index, p_index)

    def p_retrieve(p):
        p.add_argument("--store")
        p.add_argument("--index")
        p.add_argument("--concepts", help="comma-separated concept words")
        p.add_argument("--k", type=int)
        p.add_argument("--min-overlap", type=int, dest="min_overlap")
        p.add_argument("--retriever", choices=["matching", "feature", "external"])
        p.add_argument("--model")
        p.add_argument("--connect", help="command line of a stdio scorer")
        p.add_argument("--tcp", help="HOST:PORT of a socket scorer")
        p.add_argument("--timeout", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--output")

    add("retrieve", cmd_retrieve, p_retrieve)

    def p_pairs(p):
        p.add_argument("--commongen")
        p.add_argument("--neg-per-pos", type=int, dest="neg_per_pos")
        p.add_argument("--seed", type=int)
        p.add_argument("--output")

    add("build-pairs", cmd_build_pairs, p_pairs)

    def p_train(p):
        p.add_argument("--pairs")
        p.add_argument("--epochs", type=int)
        p.add_argument("--learning-rate", type=float, dest="learning_rate")
        p.add_argument("--seed", type=int)
        p.add_argument("--output")

    add("train-scorer", cmd_train_scorer, p_train)

    def p_pretrain(p):
        p.add_argument("--store")
        p.add_argument("--index")
        p.add_argument("--pool")
        p.add_argument("--vocab")
        p.add_argument("--commongen-test", dest="commongen_test")
        p.add_argument("--commongen-dev", dest="commongen_dev")
        p.add_argument("--filter-dev", action="store_const", const=True, dest="filter_dev")
        p.add_argument("--k", type=int)
        p.add_argument("--min-concepts", type=int, dest="min_concepts")
        p.add_argument("--max-concepts", type=int, dest="max_concepts")
        p.add_argument("--min-overlap", type=int, dest="min_overlap")
        p.add_argument("--leakage-mode", choices=["exact", "subset"], dest="leakage_mode")
        p.add_argument("--seed", type=int)
        p.add_argument("--output")

    add("build-pretrain", cmd_build_pretrain, p_pretrain)

    def p_finetune(p):
        p.add_argument("--store")
        p.add_argument("--index")
        p.add_argument("--commongen")
        p.add_argument("--retriever", choices=["matching", "feature", "external"])
        p.add_argument("--model")
        p.add_argument("--connect")
        p.add_argument("--tcp")
        p.add_argument("--timeout", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--min-overlap", type=int, dest="min_overlap")
        p.add_argument("--seed", type=int)
        p.add_argument("--fallback-matching", action="store_const", const=True, dest="fallback_matching")
        p.add_argument("--output")

    add("build-finetune", cmd_build_finetune, p_finetune)

    def p_eval(p):
        p.add_argument("--predictions")
        p.add_argument("--references")
        p.add_argument("--per-instance", action="store_const", const=True, dest="per_instance")
        p.add_argument("--output")

    add("evaluate", cmd_evaluate, p_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 2
    except ScorerProtocolError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 4
    except DataError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 3
    except ProtoretError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
