"""The optim module contains the Adam optimizer used to update the model parameters."""
import numpy as np

class Adam:
    """
    Adam keeps a first and a second moment estimate for every parameter array
    and updates the arrays in place.

    Params:
    ----
    - learning_rate: float, the step size. With 0, the parameters are never modified.
    - beta1, beta2: floats, the decay rates of the moment estimates.
    - eps: float, added to the denominator.
    """

    def __init__(self, learning_rate: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self._first: list[np.ndarray] = []
        self._second: list[np.ndarray] = []

    def step(self, parameters: list[np.ndarray], gradients: list[np.ndarray]):
        """Apply one update to the parameter arrays."""
        if not self._first:
            self._first = [np.zeros_like(p) for p in parameters]
            self._second = [np.zeros_like(p) for p in parameters]
        self.step_count += 1
        correction1 = 1 - self.beta1 ** self.step_count
        correction2 = 1 - self.beta2 ** self.step_count
        for param, grad, first, second in zip(parameters, gradients, self._first, self._second):
            first[:] = self.beta1 * first + (1 - self.beta1) * grad
            second[:] = self.beta2 * second + (1 - self.beta2) * grad * grad
            if self.learning_rate:
                param -= self.learning_rate * (first / correction1) / (np.sqrt(second / correction2) + self.eps)

    def state(self) -> dict:
        """Return a copy of the moments and the step counter."""
        return {
            'step_count': self.step_count,
            'first': [m.copy() for m in self._first],
            'second': [v.copy() for v in self._second],
        }
