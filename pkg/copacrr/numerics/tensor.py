"""
The tensor module contains the Tensor class, the node of the reverse-mode differentiation graph,
and the Function class from which every differentiable operation herits.
"""
from contextlib import contextmanager
import numpy as np
from ..error import NumericalError

_checked = True

def is_checked() -> bool:
    """Return whether non-finite values are rejected when tensors are created."""
    return _checked

def set_checked(checked: bool):
    """Enable or disable the rejection of non-finite values at tensor creation."""
    global _checked # pylint: disable=global-statement
    _checked = checked

@contextmanager
def unchecked():
    """Temporarily disable the finiteness checks, for instance to build a padded -inf score."""
    previous = _checked
    set_checked(False)
    try:
        yield
    finally:
        set_checked(previous)

class Tensor:
    """
    A Tensor is a dense row-major array of real numbers, and a node of the computation graph.
    A tensor created by a Function remembers it (ctx) so that backward() can propagate the gradient
    to the tensors the function received.

    Params:
    ----
    - values: anything numpy can turn into an array of floats.
    - requires_grad: bool, whether a gradient should be accumulated on this tensor.
    The tensors created by a function require a gradient if any of their inputs does.
    """

    def __init__(self, values, requires_grad: bool = False, ctx: 'Function' = None):
        self.data: np.ndarray = np.asarray(values, dtype=np.float64)
        if _checked and not np.all(np.isfinite(self.data)):
            raise NumericalError(f"A tensor of shape {self.data.shape} contains non-finite values.")
        self.grad: np.ndarray | None = None
        self.ctx = ctx
        self.requires_grad = requires_grad

    @property
    def shape(self) -> tuple[int, ...]:
        """The dimensions of the tensor."""
        return self.data.shape

    @property
    def size(self) -> int:
        """The number of values of the tensor, i.e. the product of its shape."""
        return self.data.size

    def item(self) -> float:
        """Return the value of a tensor having a single value."""
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def zero_grad(self):
        """Forget the accumulated gradient."""
        self.grad = None

    def _accumulate(self, grad: np.ndarray):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    def backward(self, grad: np.ndarray | float | None = None):
        """
        Propagate the gradient of this tensor to every tensor it depends on.
        Each node of the graph is visited exactly once, in reversed topological order.
        """
        order = _topological_order(self)
        self._accumulate(np.ones_like(self.data) if grad is None else np.broadcast_to(grad, self.data.shape))
        for node in reversed(order):
            if node.ctx is None or node.grad is None:
                continue
            parent_grads = node.ctx.backward(node.grad)
            for parent, parent_grad in zip(node.ctx.parents, parent_grads):
                if parent.requires_grad and parent_grad is not None:
                    parent._accumulate(parent_grad) # pylint: disable=protected-access

def _topological_order(root: Tensor) -> list[Tensor]:
    """Return the tensors the root depends on, each once, parents before children."""
    order = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        if node.ctx is not None:
            for parent in node.ctx.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order

def as_tensor(values) -> Tensor:
    """Return the values as a constant tensor, or themselves if they already are a tensor."""
    if isinstance(values, Tensor):
        return values
    return Tensor(values)

class Function:
    """
    A Function is a differentiable operation.
    Subclasses implement forward, on arrays, and backward, which receives the gradient of the output
    and returns one gradient (or None) per parent.
    """

    def __init__(self, *parents: Tensor):
        self.parents = parents

    @classmethod
    def apply(cls, *parents: Tensor, **kwargs) -> Tensor:
        """Create the function, compute its output and link it to the graph."""
        ctx = cls(*parents)
        output = ctx.forward(*[p.data for p in parents], **kwargs)
        requires_grad = any(p.requires_grad for p in parents)
        return Tensor(output, requires_grad=requires_grad, ctx=ctx if requires_grad else None)

    def forward(self, *args, **kwargs) -> np.ndarray:
        """Compute the output values."""
        raise NotImplementedError()

    def backward(self, grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        """Return the gradients of the parents."""
        raise NotImplementedError()
