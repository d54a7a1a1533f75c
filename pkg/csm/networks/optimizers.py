"""
Implements the first-order optimizers used to train approximators. Both keep
one accumulator per parameter array and update the model in place.
"""
from typing import List, Optional

import numpy as np

from csm.exceptions import NonFiniteGradient, ShapeMismatch
from csm.interfaces import Optimizer, Parametrized
from csm.networks.approximator import GradientSet


class _AccumulatingOptimizer(Optimizer):
    """
    Base class for optimizers that keep per-parameter state
    """
    def __init__(self, step_size: float) -> None:
        if not step_size > 0:
            raise ValueError('Step sizes must be positive, got %r' % step_size)
        self._step_size = float(step_size)
        self._shapes = None  # type: Optional[List[tuple]]

    @property
    def step_size(self) -> float:
        return self._step_size

    @step_size.setter
    def step_size(self, value: float) -> None:
        if not value > 0:
            raise ValueError('Step sizes must be positive, got %r' % value)
        self._step_size = float(value)

    def step(self, model: Parametrized, grads: GradientSet) -> Parametrized:
        """
        Apply one update to the parameters of the model

        :param model: The approximator or stacked networks to update in place
        :param grads: The gradient of the objective at the current parameters
        :return: The updated model
        :raises NonFiniteGradient: If any gradient entry is not finite
        :raises ShapeMismatch: If the gradient does not match the model
        """
        parameters = list(model.parameters())
        gradients = list(grads.arrays())
        self._check_shapes(parameters, gradients)
        if not grads.is_finite():
            raise NonFiniteGradient(
                'Refusing to apply a gradient with non-finite entries'
            )
        if self._shapes is None:
            self._shapes = [parameter.shape for parameter in parameters]
            self._allocate(parameters)
        for index, (parameter, gradient) in enumerate(
                zip(parameters, gradients)
        ):
            parameter -= self._update(index, gradient)
        return model

    def _allocate(self, parameters: List[np.ndarray]) -> None:
        raise NotImplementedError()

    def _update(self, index: int, gradient: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    def _check_shapes(
            self, parameters: List[np.ndarray], gradients: List[np.ndarray]
    ) -> None:
        if len(parameters) != len(gradients) or any(
                parameter.shape != gradient.shape
                for parameter, gradient in zip(parameters, gradients)
        ):
            raise ShapeMismatch(
                'Gradient shapes %s do not match parameter shapes %s' % (
                    [gradient.shape for gradient in gradients],
                    [parameter.shape for parameter in parameters]
                )
            )
        if self._shapes is not None and self._shapes != [
                parameter.shape for parameter in parameters
        ]:
            raise ShapeMismatch(
                'This optimizer already tracks a model of another shape'
            )


class RMSProp(_AccumulatingOptimizer):
    """
    Divides each step by a running root mean square of past gradients::

        s <- decay * s + (1 - decay) * g ** 2
        p <- p - step_size * g / sqrt(s + epsilon)
    """
    def __init__(
            self,
            step_size: float = 0.00025,
            decay: float = 0.9,
            epsilon: float = 1e-8
    ) -> None:
        super().__init__(step_size)
        self.decay = float(decay)
        self.epsilon = float(epsilon)
        self._squares = []  # type: List[np.ndarray]

    def _allocate(self, parameters: List[np.ndarray]) -> None:
        self._squares = [np.zeros_like(parameter) for parameter in parameters]

    def _update(self, index: int, gradient: np.ndarray) -> np.ndarray:
        squares = self._squares[index]
        squares *= self.decay
        squares += (1.0 - self.decay) * gradient * gradient
        return self._step_size * gradient / np.sqrt(squares + self.epsilon)


class Adam(_AccumulatingOptimizer):
    """
    Bias-corrected first and second moment estimates::

        m <- beta1 * m + (1 - beta1) * g
        v <- beta2 * v + (1 - beta2) * g ** 2
        p <- p - step_size * m_hat / (sqrt(v_hat) + epsilon)
    """
    def __init__(
            self,
            step_size: float = 1e-2,
            beta1: float = 0.9,
            beta2: float = 0.999,
            epsilon: float = 1e-8
    ) -> None:
        super().__init__(step_size)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self._first = []  # type: List[np.ndarray]
        self._second = []  # type: List[np.ndarray]
        self._steps = 0

    def step(self, model: Parametrized, grads: GradientSet) -> Parametrized:
        self._steps += 1
        try:
            return super().step(model, grads)
        except (NonFiniteGradient, ShapeMismatch):
            self._steps -= 1
            raise

    def _allocate(self, parameters: List[np.ndarray]) -> None:
        self._first = [np.zeros_like(parameter) for parameter in parameters]
        self._second = [np.zeros_like(parameter) for parameter in parameters]

    def _update(self, index: int, gradient: np.ndarray) -> np.ndarray:
        first = self._first[index]
        second = self._second[index]
        first *= self.beta1
        first += (1.0 - self.beta1) * gradient
        second *= self.beta2
        second += (1.0 - self.beta2) * gradient * gradient
        first_hat = first / (1.0 - self.beta1 ** self._steps)
        second_hat = second / (1.0 - self.beta2 ** self._steps)
        return self._step_size * first_hat / (
            np.sqrt(second_hat) + self.epsilon
        )
