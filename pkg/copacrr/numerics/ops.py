"""
The ops module contains the differentiable operations used by the ranking model:
convolution, max pooling over filters, k-max pooling, dense layers, row permutation,
concatenation, reshaping and the two pairwise losses.
"""
from typing import Literal, Sequence
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import Tensor, Function, as_tensor
from ..error import ShapeError, ConfigError

RELU = 'relu'
IDENTITY = 'identity'

SENTINEL = -1 # position of a padded k-max slot

def _check_ndim(tensor: Tensor, ndim: int, name: str):
    if len(tensor.shape) != ndim:
        raise ShapeError(f"{name} must have {ndim} dimensions, got shape {tensor.shape}.")

class _Conv2dSame(Function):

    def forward(self, x, kernels): # pylint: disable=arguments-differ
        g = kernels.shape[0]
        self.before = g // 2
        self.after = g - 1 - self.before
        padded = np.pad(x, ((self.before, self.after), (self.before, self.after)))
        # patches[i, j, a, b] = padded[i + a, j + b]
        self.patches = sliding_window_view(padded, (g, g))
        self.kernels = kernels
        return np.tensordot(self.patches, kernels, axes=([2, 3], [0, 1]))

    def backward(self, grad):
        g = self.kernels.shape[0]
        rows, cols = grad.shape[:2]
        grad_kernels = np.tensordot(self.patches, grad, axes=([0, 1], [0, 1]))
        grad_padded = np.zeros((rows + g - 1, cols + g - 1))
        for a in range(g):
            for b in range(g):
                grad_padded[a:a + rows, b:b + cols] += grad @ self.kernels[a, b]
        grad_x = grad_padded[self.before:self.before + rows, self.before:self.before + cols]
        return grad_x, grad_kernels

def conv2d_same(input_: Tensor, kernels: Tensor) -> Tensor:
    """
    Convolve a 2D input with n_f square kernels of size g, with zero 'same' padding.

    output[i, j, f] = sum_{a, b} input[i + a - g//2, j + b - g//2] * kernels[a, b, f],
    the input being 0 out of its range, so that the output has the spatial shape of the input.

    Params:
    ----
    - input_: Tensor of shape (l_q, l_d)
    - kernels: Tensor of shape (g, g, n_f), g >= 2

    Returns:
    ----
    - Tensor of shape (l_q, l_d, n_f)
    """
    _check_ndim(input_, 2, "The convolution input")
    _check_ndim(kernels, 3, "The convolution kernels")
    g, g2, n_f = kernels.shape
    if g != g2:
        raise ShapeError(f"The kernels must be square, got dimension 0 of size {g} and dimension 1 of size {g2}.")
    if g < 2:
        raise ShapeError(f"The kernel size (dimension 0 of the kernels) must be at least 2, got {g}.")
    if n_f < 1:
        raise ShapeError("The number of filters (dimension 2 of the kernels) must be at least 1.")
    return _Conv2dSame.apply(input_, kernels)

class _MaxOverFilters(Function):

    def forward(self, x): # pylint: disable=arguments-differ
        # np.argmax returns the first maximal index, so ties go to the lowest filter.
        self.argmax = np.argmax(x, axis=-1)
        self.shape = x.shape
        return np.take_along_axis(x, self.argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad):
        grad_x = np.zeros(self.shape)
        np.put_along_axis(grad_x, self.argmax[..., None], grad[..., None], axis=-1)
        return (grad_x,)

def max_over_filters(input_: Tensor) -> Tensor:
    """
    Keep, for each cell of a (l_q, l_d, n_f) tensor, the strongest filter.
    The gradient only flows to the first maximal filter.
    """
    _check_ndim(input_, 3, "The filter max pooling input")
    if input_.shape[2] < 1:
        raise ShapeError("The number of filters (dimension 2) must be at least 1.")
    return _MaxOverFilters.apply(input_)

class _KMax(Function):

    def forward(self, x, k, end): # pylint: disable=arguments-differ
        self.shape = x.shape
        matrix = x.reshape(-1, x.shape[-1])[:, :end]
        kept = min(k, matrix.shape[1])
        # stable sort of the negated values: descending order, ties by lowest index.
        order = np.argsort(-matrix, axis=1, kind='stable')[:, :kept]
        values = np.zeros((matrix.shape[0], k))
        positions = np.full((matrix.shape[0], k), SENTINEL, dtype=np.int64)
        values[:, :kept] = np.take_along_axis(matrix, order, axis=1)
        positions[:, :kept] = order
        self.order = order
        self.positions = positions.reshape(*x.shape[:-1], k)
        return values.reshape(*x.shape[:-1], k)

    def backward(self, grad):
        kept = self.order.shape[1]
        grad_matrix = np.zeros((self.order.shape[0], self.shape[-1]))
        flat_grad = grad.reshape(-1, grad.shape[-1])
        np.put_along_axis(grad_matrix, self.order, flat_grad[:, :kept], axis=1)
        return (grad_matrix.reshape(self.shape),)

def kmax_pool(input_: Tensor, k: int, end: int | None = None) -> tuple[Tensor, np.ndarray]:
    """
    Apply k-max pooling to every row of a 1D or 2D tensor, restricted to the prefix [0, end) of the rows.

    Returns the k largest values of each row in descending order (ties: lowest index first) and their positions.
    When the prefix is shorter than k, the values are padded with 0 and the positions with SENTINEL.
    """
    if k < 1:
        raise ConfigError(f"The number of kept values k must be at least 1, got {k}.")
    if len(input_.shape) not in (1, 2):
        raise ShapeError(f"The k-max pooling input must have 1 or 2 dimensions, got shape {input_.shape}.")
    length = input_.shape[-1]
    end = length if end is None else end
    if not 0 <= end <= length:
        raise ShapeError(f"The pooling prefix {end} exceeds the last dimension of size {length}.")
    ctx = _KMax(input_)
    values = ctx.forward(input_.data, k, end)
    if input_.requires_grad:
        return Tensor(values, requires_grad=True, ctx=ctx), ctx.positions
    return Tensor(values), ctx.positions

def kmax_with_positions(row: Tensor, k: int) -> tuple[Tensor, list[int]]:
    """
    Keep the k strongest signals of a row.

    Params:
    ----
    - row: Tensor of shape (n,)
    - k: int, the number of values to keep, at least 1.

    Returns:
    ----
    - the values, Tensor of shape (k,), in descending order
    - the positions of the values in the row, -1 for the padded slots when n < k.
    """
    _check_ndim(row, 1, "The k-max pooling row")
    values, positions = kmax_pool(row, k)
    return values, [int(p) for p in positions]

class _Dense(Function):

    def forward(self, x, weights, bias, activation): # pylint: disable=arguments-differ
        self.x = x
        self.weights = weights
        pre_activation = x @ weights + bias
        if activation == RELU:
            self.mask = pre_activation > 0
            return np.where(self.mask, pre_activation, 0.0)
        self.mask = None
        return pre_activation

    def backward(self, grad):
        if self.mask is not None:
            grad = grad * self.mask
        return grad @ self.weights.T, np.outer(self.x, grad), grad

def dense(input_: Tensor, weights: Tensor, bias: Tensor, activation: Literal['relu', 'identity'] = IDENTITY) -> Tensor:
    """
    Apply an affine map followed by an activation.

    Params:
    ----
    - input_: Tensor of shape (m,)
    - weights: Tensor of shape (m, n)
    - bias: Tensor of shape (n,)
    - activation: 'relu' or 'identity'
    """
    _check_ndim(input_, 1, "The dense input")
    _check_ndim(weights, 2, "The dense weights")
    _check_ndim(bias, 1, "The dense bias")
    if weights.shape[0] != input_.shape[0]:
        raise ShapeError(
            f"The dense weights expect an input of size {weights.shape[0]} (dimension 0), got {input_.shape[0]}."
        )
    if weights.shape[1] != bias.shape[0]:
        raise ShapeError(
            f"The dense bias has size {bias.shape[0]} but the weights produce {weights.shape[1]} outputs (dimension 1)."
        )
    if activation not in (RELU, IDENTITY):
        raise ConfigError(f"Unknown activation {activation}, expected {RELU} or {IDENTITY}.")
    return _Dense.apply(input_, weights, bias, activation=activation)

def _check_permutation(perm: Sequence[int], size: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (size,) or not np.array_equal(np.sort(perm), np.arange(size)):
        raise ConfigError(f"{list(perm)} is not a permutation of the {size} rows.")
    return perm

class _PermuteRows(Function):

    def forward(self, x, perm): # pylint: disable=arguments-differ
        self.perm = perm
        return x[perm]

    def backward(self, grad):
        grad_x = np.empty_like(grad)
        grad_x[self.perm] = grad
        return (grad_x,)

def permute_rows(input_: Tensor, perm: Sequence[int]) -> Tensor:
    """Return the tensor whose row i is the row perm[i] of the input."""
    if len(input_.shape) < 1:
        raise ShapeError("Cannot permute the rows of a scalar.")
    perm = _check_permutation(perm, input_.shape[0])
    return _PermuteRows.apply(input_, perm=perm)

def inverse_permutation(perm: Sequence[int]) -> np.ndarray:
    """Return the permutation undoing perm."""
    perm = _check_permutation(perm, len(perm))
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(len(perm))
    return inverse

class _Concat(Function):

    def forward(self, *arrays, axis): # pylint: disable=arguments-differ
        self.axis = axis
        self.splits = np.cumsum([a.shape[axis] for a in arrays])[:-1]
        return np.concatenate(arrays, axis=axis)

    def backward(self, grad):
        return tuple(np.split(grad, self.splits, axis=self.axis))

def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    """Concatenate tensors along an axis."""
    tensors = [as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeError("Cannot concatenate an empty list of tensors.")
    return _Concat.apply(*tensors, axis=axis)

class _Reshape(Function):

    def forward(self, x, shape): # pylint: disable=arguments-differ
        self.shape = x.shape
        return x.reshape(shape)

    def backward(self, grad):
        return (grad.reshape(self.shape),)

def reshape(input_: Tensor, shape: tuple[int, ...]) -> Tensor:
    """Reshape a tensor, row-major."""
    if int(np.prod(shape)) != input_.size and -1 not in shape:
        raise ShapeError(f"Cannot reshape a tensor of shape {input_.shape} into {shape}.")
    return _Reshape.apply(input_, shape=shape)

def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    z = np.exp(x)
    return z / (1.0 + z)

class _PairwiseCE(Function):

    def forward(self, rel_pos, rel_neg): # pylint: disable=arguments-differ
        diff = float(rel_neg.reshape(-1)[0] - rel_pos.reshape(-1)[0])
        self.prob_wrong = _sigmoid(diff)
        self.shapes = rel_pos.shape, rel_neg.shape
        # -log(sigmoid(pos - neg)) = softplus(neg - pos)
        return np.array(max(diff, 0.0) + np.log1p(np.exp(-abs(diff))))

    def backward(self, grad):
        grad = float(grad)
        return (np.full(self.shapes[0], -self.prob_wrong * grad), np.full(self.shapes[1], self.prob_wrong * grad))

def pairwise_ce_loss(rel_pos: Tensor, rel_neg: Tensor) -> Tensor:
    """
    The cross-entropy loss of a pair: -log(exp(rel_pos) / (exp(rel_pos) + exp(rel_neg))),
    computed without overflow.
    """
    return _PairwiseCE.apply(as_tensor(rel_pos), as_tensor(rel_neg))

class _PairwiseMargin(Function):

    def forward(self, rel_pos, rel_neg): # pylint: disable=arguments-differ
        value = 1.0 - float(rel_pos.reshape(-1)[0]) + float(rel_neg.reshape(-1)[0])
        self.active = value > 0 # the subgradient is 0 at the kink
        self.shapes = rel_pos.shape, rel_neg.shape
        return np.array(max(value, 0.0))

    def backward(self, grad):
        grad = float(grad) if self.active else 0.0
        return (np.full(self.shapes[0], -grad), np.full(self.shapes[1], grad))

def pairwise_margin_loss(rel_pos: Tensor, rel_neg: Tensor) -> Tensor:
    """The hinge loss of a pair: max(0, 1 - rel_pos + rel_neg)."""
    return _PairwiseMargin.apply(as_tensor(rel_pos), as_tensor(rel_neg))
