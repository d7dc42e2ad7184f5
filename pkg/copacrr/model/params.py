"""The params module contains the trainable weights of the model."""
import hashlib
import numpy as np

from .config import ModelConfig, pooled_feature_width
from ..numerics import Tensor
from ..error import ShapeError

def _glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)

def parameter_shapes(config: ModelConfig) -> list[tuple[str, tuple[int, ...]]]:
    """Return the name and shape of every parameter array, in their declared order."""
    shapes = [(f"kernel_{g}", (g, g, config.n_f)) for g in range(2, config.l_g + 1)]
    width = config.l_q * pooled_feature_width(config)
    for index, size in enumerate(list(config.hidden_sizes) + [1]):
        shapes.append((f"dense_{index}_weights", (width, size)))
        shapes.append((f"dense_{index}_bias", (size,)))
        width = size
    return shapes

def parameter_count(config: ModelConfig) -> int:
    """Return the number of trainable values of a model."""
    return sum(int(np.prod(shape)) for _, shape in parameter_shapes(config))

class ModelParams:
    """
    The ModelParams contain the convolution kernels, one (g, g, n_f) array for every g in [2, l_g],
    and the weights and biases of the dense stack, from the flattened pooled matrix to the hidden layers, then to one score.
    """

    def __init__(self, config: ModelConfig, arrays: list[np.ndarray]):
        self.config = config
        shapes = parameter_shapes(config)
        if len(arrays) != len(shapes):
            raise ShapeError(f"The model needs {len(shapes)} parameter arrays, got {len(arrays)}.")
        for (name, shape), array in zip(shapes, arrays):
            if tuple(array.shape) != shape:
                raise ShapeError(f"The parameter {name} should have the shape {shape}, got {tuple(array.shape)}.")
        self.names = [name for name, _ in shapes]
        self.arrays = [np.array(a, dtype=np.float64) for a in arrays]

    @classmethod
    def initialize(cls, config: ModelConfig, rng: np.random.Generator) -> 'ModelParams':
        """Draw the weights uniformly in [-sqrt(6 / (fan_in + fan_out)), +sqrt(6 / (fan_in + fan_out))], biases at 0."""
        arrays = []
        for name, shape in parameter_shapes(config):
            if name.startswith('kernel'):
                g = shape[0]
                arrays.append(_glorot(rng, shape, g * g, g * g * config.n_f))
            elif name.endswith('weights'):
                arrays.append(_glorot(rng, shape, shape[0], shape[1]))
            else:
                arrays.append(np.zeros(shape))
        return cls(config, arrays)

    def kernel(self, g: int) -> np.ndarray:
        """The kernels of the g-gram convolution."""
        return self.arrays[self.names.index(f"kernel_{g}")]

    def dense_layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """The (weights, bias) of every dense layer, the last one producing the score."""
        first = self.config.l_g - 1
        return [(self.arrays[i], self.arrays[i + 1]) for i in range(first, len(self.arrays), 2)]

    def leaves(self, requires_grad: bool = True) -> 'GraphParams':
        """Return new graph leaves wrapping the arrays, to differentiate one computation."""
        return GraphParams(self, requires_grad)

    def copy(self) -> 'ModelParams':
        """Return a deep copy of the parameters."""
        return ModelParams(self.config, [a.copy() for a in self.arrays])

    def count(self) -> int:
        """The number of trainable values."""
        return sum(a.size for a in self.arrays)

    def checksum(self) -> str:
        """Return the sha256 of the parameter values."""
        sha = hashlib.sha256()
        for array in self.arrays:
            sha.update(np.ascontiguousarray(array, dtype='<f8').tobytes())
        return sha.hexdigest()

class GraphParams:
    """The tensors wrapping the arrays of a ModelParams in one computation graph."""

    def __init__(self, params: ModelParams, requires_grad: bool = True):
        self.params = params
        self.tensors = [Tensor(a, requires_grad=requires_grad) for a in params.arrays]
        self._by_name = dict(zip(params.names, self.tensors))

    def kernel(self, g: int) -> Tensor:
        """The kernels of the g-gram convolution."""
        return self._by_name[f"kernel_{g}"]

    def dense_layers(self) -> list[tuple[Tensor, Tensor]]:
        """The (weights, bias) tensors of every dense layer."""
        first = self.params.config.l_g - 1
        return [(self.tensors[i], self.tensors[i + 1]) for i in range(first, len(self.tensors), 2)]

    def gradients(self) -> list[np.ndarray]:
        """The gradient of every parameter, zeros where nothing was accumulated."""
        return [np.zeros_like(t.data) if t.grad is None else t.grad for t in self.tensors]
