"""The model package assembles the ranking model and its variants."""
from .config import ModelConfig, VARIANTS, CROSS_ENTROPY, MAX_MARGIN, pooled_feature_width
from .params import ModelParams, GraphParams, parameter_shapes, parameter_count
from .network import (
    ScoreOutput, PoolTrace, forward, score_inference, pooled_features, combine, ngram_matrices, permutation_sensitivity
)
from .checkpoint import save_checkpoint, load_checkpoint, dump_checkpoint, parse_checkpoint

__all__ = ['ModelConfig', 'VARIANTS', 'CROSS_ENTROPY', 'MAX_MARGIN', 'pooled_feature_width',
           'ModelParams', 'GraphParams', 'parameter_shapes', 'parameter_count',
           'ScoreOutput', 'PoolTrace', 'forward', 'score_inference', 'pooled_features', 'combine', 'ngram_matrices',
           'permutation_sensitivity', 'save_checkpoint', 'load_checkpoint', 'dump_checkpoint', 'parse_checkpoint']
