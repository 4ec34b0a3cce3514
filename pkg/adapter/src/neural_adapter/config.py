"""Adapter configuration.

The defaults document the full-scale training recipe (T5-base generator,
BERT-base cross-encoder, AdamW schedules). The built-in compact models
trained from scratch need far larger learning rates; tests and the CLI
pass explicit toy overrides. No pretrained checkpoints are downloadable
in this environment, so `init_checkpoint` is how fine-tuning from
existing weights happens.
"""

from dataclasses import asdict, dataclass


@dataclass
class AdapterConfig:
    # model identities (documentation at full scale; "tiny" = built-in)
    generator_model: str = "t5-base"
    scorer_model: str = "bert-base-uncased"

    # full-scale generator pre-training schedule
    pretrain_learning_rate: float = 2e-6
    pretrain_epochs: int = 3
    pretrain_batch_size: int = 16
    pretrain_grad_accumulation: int = 4

    # full-scale generator fine-tuning schedule
    finetune_learning_rate: float = 5e-5
    finetune_epochs: int = 20
    finetune_batch_size: int = 64
    finetune_grad_accumulation: int = 3

    # full-scale cross-encoder scorer schedule
    scorer_learning_rate: float = 2e-5
    scorer_epochs: int = 3
    scorer_batch_size: int = 64

    # shared optimizer settings
    weight_decay: float = 0.01
    adam_epsilon: float = 1e-6
    warmup_fraction: float = 0.01

    # prototype count the datasets were built with
    k: int = 3

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class TinyModelConfig:
    """Dimensions of the built-in compact transformer models."""

    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    ffn_size: int = 128
    max_len: int = 64
    dropout: float = 0.0  # keep eval-mode scoring bit-deterministic

    def to_json(self) -> dict:
        return asdict(self)
