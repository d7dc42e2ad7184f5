"""
Copacrr is a python library used to train and evaluate neural re-ranking models for ad-hoc retrieval.
Built on numpy, it contains its own differentiation engine and the whole experiment pipeline.

Copacrr contains the following features:
similarity matrices and context signals built from word embeddings,
the PACRR model and its cascade, disambiguation and shuffling components,
pairwise training, ERR and pair accuracy evaluation, re-ranking of TREC runs.
"""
from .config import RunConfig, SCHEMA
from .error import CopacrrException, ConfigError, ShapeError, DataError, CheckpointError, NumericalError
from .logger import Logger
from ._base import Experiment, load_embeddings

from .model import ModelConfig, ModelParams, VARIANTS, forward, score_inference, save_checkpoint, load_checkpoint
from .corpus import Corpus, Judgments, RankedList, read_qrels, read_run, write_run
from .embedding import EmbeddingTable, SimInput, SimCache
from .evaluation import err_at_k, pair_accuracy, rerank_with_model, rerank_all_stats
from .training import Trainer, TrainState, sample_pairs, round_robin, holdout
from .synthetic import generate

from . import numerics, corpus, embedding, model, training, evaluation, commands

__all__ = ['RunConfig', 'SCHEMA', 'CopacrrException', 'ConfigError', 'ShapeError', 'DataError', 'CheckpointError',
           'NumericalError', 'Logger', 'Experiment', 'load_embeddings', 'ModelConfig', 'ModelParams', 'VARIANTS',
           'forward', 'score_inference', 'save_checkpoint', 'load_checkpoint', 'Corpus', 'Judgments', 'RankedList',
           'read_qrels', 'read_run', 'write_run', 'EmbeddingTable', 'SimInput', 'SimCache', 'err_at_k',
           'pair_accuracy', 'rerank_with_model', 'rerank_all_stats', 'Trainer', 'TrainState', 'sample_pairs',
           'round_robin', 'holdout', 'generate', 'numerics', 'corpus', 'embedding', 'model', 'training',
           'evaluation', 'commands']
