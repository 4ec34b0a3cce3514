"""protoret: concept-indexed prototype retrieval and dataset construction.

The pipeline: ingest corpora into a SentenceStore, exclude benchmark
targets, build an InvertedIndex, retrieve prototype sentences per concept
set (matching or trained scorer), emit pre-training / fine-tuning JSONL
for a downstream generator, and evaluate generated text.
"""

from .concept_index import CandidateSet, InvertedIndex, match_count
from .corpus import (
    CommonGenEntry,
    ConceptSet,
    SentenceRecord,
    SentenceStore,
    Split,
    exclude_targets,
    ingest_corpus,
    load_commongen,
    sample_pool,
)
from .dataset_builder import (
    ConceptVocabulary,
    Seq2SeqExample,
    build_finetune,
    build_pretrain,
    extract_pseudo_concepts,
    leakage_filter,
    parse_source,
    serialize_source,
)
from .errors import ConfigError, DataError, ProtoretError, ScorerProtocolError
from .metrics import MetricReport, bleu4, cider, coverage, evaluate, rouge_l
from .retrieval import (
    ExternalScorerClient,
    FeatureScorer,
    FeatureVector,
    MatchingRetriever,
    PrototypeList,
    RankingRetriever,
    ScorerModel,
    ScorerTrainConfig,
    TrainingPair,
    build_pairs,
    extract_features,
    matching_retrieve,
    rank_retrieve,
    score,
    train_scorer,
)
from .textnorm import LemmaLexicon, Pos, Token, analyze, default_lexicon, lemmatize, normalize_text, tag, tokenize

__version__ = "0.1.0"
