"""
Describes a first-order optimizer that updates trainable parameters in place
"""
import abc
from typing import Iterator, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from csm.networks.approximator import GradientSet


class Parametrized(object, metaclass=abc.ABCMeta):
    """
    Anything whose trainable state is a fixed sequence of float arrays
    """
    @abc.abstractmethod
    def parameters(self) -> Iterator[np.ndarray]:
        """

        :return: The parameter arrays in a fixed order. The arrays are live;
            writing to them changes the owner
        """
        raise NotImplementedError()


class Optimizer(object, metaclass=abc.ABCMeta):
    """
    Base class for optimizers. An optimizer owns the accumulators of exactly
    one parametrized model; the first call to :meth:`step` fixes which one.
    """
    @property
    @abc.abstractmethod
    def step_size(self) -> float:
        """

        :return: The current step size
        """
        raise NotImplementedError()

    @step_size.setter
    @abc.abstractmethod
    def step_size(self, value: float) -> None:
        raise NotImplementedError()

    @abc.abstractmethod
    def step(
            self, model: Parametrized, grads: 'GradientSet'
    ) -> Parametrized:
        """
        Apply one update to the parameters of the model

        :param model: The model to update in place
        :param grads: The gradient of the objective at the current parameters,
            in the order of ``model.parameters()``
        :return: The updated model
        :raises NonFiniteGradient: If any gradient entry is not finite
        """
        raise NotImplementedError()
