"""
The numerics package is a minimal reverse-mode differentiation engine
providing the operations of the ranking model.
"""
from .tensor import Tensor, Function, set_checked, is_checked, unchecked
from .ops import (
    conv2d_same, max_over_filters, kmax_pool, kmax_with_positions, dense, permute_rows, inverse_permutation,
    concat, reshape, pairwise_ce_loss, pairwise_margin_loss, RELU, IDENTITY, SENTINEL
)
from .optim import Adam

__all__ = ['Tensor', 'Function', 'set_checked', 'is_checked', 'unchecked',
           'conv2d_same', 'max_over_filters', 'kmax_pool', 'kmax_with_positions', 'dense', 'permute_rows',
           'inverse_permutation', 'concat', 'reshape', 'pairwise_ce_loss', 'pairwise_margin_loss',
           'RELU', 'IDENTITY', 'SENTINEL', 'Adam']
