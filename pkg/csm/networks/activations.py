"""
Describes the hidden-layer nonlinearities an approximator can use
"""
import enum

import numpy as np
from scipy.special import expit


class Activation(enum.Enum):
    """
    A hidden-layer activation together with its derivative. Output layers are
    always linear.
    """
    SIGMOID = 'sigmoid'
    RELU = 'relu'

    def apply(self, z: np.ndarray) -> np.ndarray:
        """

        :param z: Pre-activations
        :return: The activation applied elementwise
        """
        if self is Activation.SIGMOID:
            return expit(z)
        return np.maximum(z, 0.0)

    def derivative(self, z: np.ndarray, a: np.ndarray) -> np.ndarray:
        """

        :param z: Pre-activations
        :param a: The activations computed from ``z``
        :return: The elementwise derivative of the activation at ``z``
        """
        if self is Activation.SIGMOID:
            return a * (1.0 - a)
        return (z > 0.0).astype(np.float64)
