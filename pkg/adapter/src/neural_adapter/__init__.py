"""Neural adapter for the protoret pipeline.

Trains a compact seq2seq generator on the pipeline's dataset JSONL,
trains a transformer cross-encoder on its training-pair JSONL, and serves
the trained scorer over the line-delimited JSON wire protocol. Consumes
only the pipeline's file formats, never its internals.
"""

from .config import AdapterConfig, TinyModelConfig
from .data import AdapterDataError, load_examples, load_pairs
from .generator import generate, load_generator, train_generator
from .scorer import load_scorer, score_pairs_with, train_neural_scorer
from .server import ScorerService, serve_stdio, serve_tcp

__version__ = "0.1.0"
