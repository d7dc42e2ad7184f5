"""
The network module contains the forward pass of the model:
n-gram matrices, (cascade) k-max pooling, disambiguation signals, idf,
optional row shuffling and the dense combination.
"""
from dataclasses import dataclass, field
import numpy as np

from .config import ModelConfig, pooled_feature_width
from .params import ModelParams, GraphParams, parameter_shapes
from ..embedding import SimInput
from ..numerics import (
    Tensor, conv2d_same, max_over_filters, kmax_pool, concat, reshape, dense, permute_rows, RELU, IDENTITY
)
from ..error import ShapeError, ConfigError

@dataclass
class PoolTrace:
    """The pooled values and positions of one n-gram size g and one cascade segment, for every query row."""

    g: int
    segment: int
    end: int
    values: np.ndarray
    positions: np.ndarray

@dataclass
class ScoreOutput:
    """The score rel(q, d) of a pair, its graph node and, on demand, the pooling trace."""

    rel: float
    tensor: Tensor
    features: Tensor
    trace: list[PoolTrace] = field(default_factory=list)

def _check_input(sim_input: SimInput, config: ModelConfig):
    if sim_input.sim.shape != (config.l_q, config.l_d):
        raise ShapeError(f"The similarity matrix should have the shape {(config.l_q, config.l_d)}, got {sim_input.sim.shape}.")
    if sim_input.querysim.shape != (config.l_d,):
        raise ShapeError(f"The querysim vector should have the shape {(config.l_d,)}, got {sim_input.querysim.shape}.")
    if sim_input.idf.shape != (config.l_q,):
        raise ShapeError(f"The idf vector should have the shape {(config.l_q,)}, got {sim_input.idf.shape}.")

def _check_params(params: ModelParams, config: ModelConfig):
    if parameter_shapes(params.config) != parameter_shapes(config):
        raise ConfigError(f"The parameters were built for the variant {params.config.variant} with other dimensions.")

def ngram_matrices(sim_input: SimInput, graph: GraphParams, config: ModelConfig) -> list[Tensor]:
    """Return C^1, the similarity matrix, and C^g = max over filters of the g-gram convolution, for g in [2, l_g]."""
    sim = Tensor(sim_input.sim)
    matrices = [sim]
    for g in range(2, config.l_g + 1):
        matrices.append(max_over_filters(conv2d_same(sim, graph.kernel(g))))
    return matrices

def pooled_features(sim_input: SimInput, graph: GraphParams, config: ModelConfig, trace: list | None = None) -> Tensor:
    """
    Build the pooled matrix P of shape (l_q, pooled_feature_width(config)).
    Every row holds, for each g and each cascade segment, the n_s strongest signals of the segment prefix,
    followed by the querysim at their positions when the disambiguation is on; the last column is the idf.
    """
    pieces = []
    for g, matrix in enumerate(ngram_matrices(sim_input, graph, config), start=1):
        for segment, end in enumerate(config.boundaries):
            values, positions = kmax_pool(matrix, config.n_s, end)
            pieces.append(values)
            if config.disamb:
                gathered = sim_input.querysim[np.maximum(positions, 0)]
                pieces.append(Tensor(np.where(positions >= 0, gathered, 0.0)))
            if trace is not None:
                trace.append(PoolTrace(g, segment, end, values.data.copy(), positions.copy()))
    pieces.append(Tensor(sim_input.idf[:, None]))
    return concat(pieces, axis=1)

def combine(features: Tensor, graph: GraphParams) -> Tensor:
    """Flatten the pooled matrix and apply the dense stack: ReLU hidden layers, a linear score."""
    x = reshape(features, (features.size,))
    layers = graph.dense_layers()
    for weights, bias in layers[:-1]:
        x = dense(x, weights, bias, RELU)
    weights, bias = layers[-1]
    return dense(x, weights, bias, IDENTITY)

def forward(
    sim_input: SimInput,
    params: ModelParams,
    config: ModelConfig,
    shuffle_perm=None,
    graph: GraphParams | None = None,
    trace: bool = False
) -> ScoreOutput:
    """
    Compute rel(q, d).

    Params:
    ----
    - sim_input: the inputs of the pair.
    - params: the weights of the model.
    - config: the model config; its dimensions must match the parameters.
    - shuffle_perm: a permutation of the l_q rows of P, only with the shuffling component, during training.
    - graph: the graph leaves of the parameters, to collect their gradients. New leaves are created if None.
    - trace: bool, whether to record the pooled values and positions.
    """
    _check_input(sim_input, config)
    _check_params(params, config)
    if shuffle_perm is not None and not config.shuffle:
        raise ConfigError(f"A shuffling permutation was given to the variant {config.variant}, which does not shuffle.")
    graph = graph if graph is not None else params.leaves(requires_grad=False)
    traces = [] if trace else None
    features = pooled_features(sim_input, graph, config, traces)
    combined = features if shuffle_perm is None else permute_rows(features, shuffle_perm)
    rel = combine(combined, graph)
    return ScoreOutput(rel=rel.item(), tensor=rel, features=features, trace=traces or [])

def score_inference(sim_input: SimInput, params: ModelParams, config: ModelConfig) -> float:
    """Score a pair with the rows of P in their natural order."""
    return forward(sim_input, params, config).rel

def permutation_sensitivity(
    sim_input: SimInput,
    params: ModelParams,
    config: ModelConfig,
    rng: np.random.Generator,
    trials: int = 16
) -> float:
    """Return the standard deviation of the scores of a pair under random permutations of the rows of P."""
    _check_input(sim_input, config)
    graph = params.leaves(requires_grad=False)
    features = pooled_features(sim_input, graph, config)
    scores = [combine(permute_rows(features, rng.permutation(config.l_q)), graph).item() for _ in range(trials)]
    return float(np.std(scores))

__all__ = ['ScoreOutput', 'PoolTrace', 'forward', 'score_inference', 'pooled_features', 'combine',
           'ngram_matrices', 'permutation_sensitivity', 'pooled_feature_width']
