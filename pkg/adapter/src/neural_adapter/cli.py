"""neural-adapter CLI: train the generator or the scorer on pipeline
output files, serve the scorer over the wire protocol, or run inference.
"""

from __future__ import annotations

import argparse
import sys

from .config import AdapterConfig, TinyModelConfig
from .data import AdapterDataError


def _model_cfg(args) -> TinyModelConfig:
    return TinyModelConfig(d_model=args.d_model, n_layers=args.n_layers, max_len=args.max_len)


def cmd_train_generator(args):
    from .generator import train_generator

    losses = train_generator(
        args.examples,
        args.output,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        seed=args.seed,
        model_cfg=_model_cfg(args),
        init_checkpoint=args.init_checkpoint,
    )
    print(f"generator trained: loss {losses[0]:.4f} -> {losses[-1]:.4f}; checkpoint {args.output}")
    return 0


def cmd_train_scorer(args):
    from .scorer import train_neural_scorer

    meta = train_neural_scorer(
        args.pairs,
        args.output,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        seed=args.seed,
        model_cfg=_model_cfg(args),
    )
    print(
        f"scorer trained: loss {meta['losses'][0]:.4f} -> {meta['losses'][-1]:.4f}, "
        f"holdout AUC {meta['holdout_auc']:.3f}; checkpoint {args.output}"
    )
    return 0


def cmd_serve(args):
    from .server import ScorerService, serve_stdio, serve_tcp

    service = ScorerService(args.checkpoint)
    if args.tcp is not None:
        serve_tcp(service, args.host, args.tcp)
    else:
        serve_stdio(service)
    return 0


def cmd_generate(args):
    from .generator import generate

    print(generate(args.checkpoint, args.input))
    return 0


def build_parser():
    full = AdapterConfig()
    parser = argparse.ArgumentParser(prog="neural-adapter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--d-model", type=int, default=64)
        p.add_argument("--n-layers", type=int, default=2)
        p.add_argument("--max-len", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train-generator", help="fit the seq2seq generator on dataset JSONL")
    p.add_argument("--examples", required=True)
    p.add_argument("--output", required=True)
    # full-scale defaults match the documented recipe; toy runs override
    p.add_argument("--epochs", type=int, default=full.finetune_epochs)
    p.add_argument("--learning-rate", type=float, default=full.finetune_learning_rate)
    p.add_argument("--batch-size", type=int, default=full.finetune_batch_size)
    p.add_argument("--init-checkpoint", help="continue from an existing generator checkpoint")
    add_model_flags(p)
    p.set_defaults(func=cmd_train_generator)

    p = sub.add_parser("train-scorer", help="fit the cross-encoder on pairs JSONL")
    p.add_argument("--pairs", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--epochs", type=int, default=full.scorer_epochs)
    p.add_argument("--learning-rate", type=float, default=full.scorer_learning_rate)
    p.add_argument("--batch-size", type=int, default=full.scorer_batch_size)
    add_model_flags(p)
    p.set_defaults(func=cmd_train_scorer)

    p = sub.add_parser("serve", help="speak the scorer wire protocol on stdio or TCP")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--tcp", type=int, default=None, help="listen on this port (0 = ephemeral)")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("generate", help="greedy-decode one input")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AdapterDataError as exc:
        print(f"data-error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
