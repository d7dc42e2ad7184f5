"""The embedding package loads the word vectors and builds the inputs of the model."""
from .table import EmbeddingTable
from .inputs import (
    SimInput, term_sim, build_sim_matrix, query_vec, context_vec, build_querysim, build_sim_input, idf_row
)
from .cache import SimCache

__all__ = ['EmbeddingTable', 'SimInput', 'term_sim', 'build_sim_matrix', 'query_vec', 'context_vec',
           'build_querysim', 'build_sim_input', 'idf_row', 'SimCache']
