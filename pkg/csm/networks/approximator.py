"""
Implements fully connected networks with a fixed topology. Each layer is an
affine map followed by the hidden activation; the last layer is affine only.
Gradients are computed by hand-written reverse mode, so the whole engine is a
few matrix products per layer.

Inputs may be a single vector of length ``d_in`` or a batch of shape
``(n, d_in)``. Gradients of a batch are summed over its rows.
"""
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from csm.exceptions import ShapeMismatch
from csm.interfaces import Parametrized
from csm.networks.activations import Activation


class GradientSet(object):
    """
    One gradient array per parameter array of an approximator, in the same
    shapes
    """
    def __init__(
            self, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]
    ) -> None:
        self._weights = list(weights)
        self._biases = list(biases)

    @classmethod
    def zeros_like(cls, model: 'Approximator') -> 'GradientSet':
        """

        :param model: The approximator whose shapes to copy
        :return: An all-zero gradient for that approximator
        """
        return cls(
            [np.zeros_like(weight) for weight in model.weights],
            [np.zeros_like(bias) for bias in model.biases]
        )

    @property
    def weights(self) -> List[np.ndarray]:
        return self._weights

    @property
    def biases(self) -> List[np.ndarray]:
        return self._biases

    def arrays(self) -> Iterator[np.ndarray]:
        """

        :return: The gradient arrays in parameter order: weights then bias of
            each layer, first layer first
        """
        for weight, bias in zip(self._weights, self._biases):
            yield weight
            yield bias

    def norm(self) -> float:
        """

        :return: The Euclidean norm of all entries taken together
        """
        return float(np.sqrt(sum(
            float(np.sum(array * array)) for array in self.arrays()
        )))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(array)) for array in self.arrays())

    def __add__(self, other: 'GradientSet') -> 'GradientSet':
        return GradientSet(
            [a + b for a, b in zip(self._weights, other._weights)],
            [a + b for a, b in zip(self._biases, other._biases)]
        )

    def __mul__(self, scale: float) -> 'GradientSet':
        return GradientSet(
            [scale * weight for weight in self._weights],
            [scale * bias for bias in self._biases]
        )

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return '{0}(shapes={1}, norm={2:.6g})'.format(
            self.__class__.__name__,
            [weight.shape for weight in self._weights], self.norm()
        )


class Approximator(Parametrized):
    """
    A multilayer perceptron. Weight matrix ``l`` has shape
    ``(layer_dims[l + 1], layer_dims[l])``, so a layer computes
    ``W x + b``.
    """
    def __init__(
            self,
            layer_dims: Sequence[int],
            weights: Sequence[np.ndarray],
            biases: Sequence[np.ndarray],
            activation: Activation = Activation.SIGMOID,
            copy: bool = True
    ) -> None:
        """

        :param layer_dims: Input size, hidden sizes and output size
        :param weights: One matrix per layer
        :param biases: One vector per layer
        :param activation: The hidden-layer activation
        :param copy: Set to ``False`` to keep float64 parameter arrays as
            given, so the network reads and writes the caller's memory
        :raises ShapeMismatch: If any parameter has the wrong shape
        :raises ValueError: If any parameter is not finite
        """
        self._layer_dims = tuple(int(dim) for dim in layer_dims)
        convert = np.array if copy else np.asarray
        self._weights = [convert(w, dtype=np.float64) for w in weights]
        self._biases = [convert(b, dtype=np.float64) for b in biases]
        self._activation = Activation(activation)
        self._check_consistency()

    @classmethod
    def initialize(
            cls,
            layer_dims: Sequence[int],
            rng: np.random.Generator,
            activation: Activation = Activation.SIGMOID
    ) -> 'Approximator':
        """

        :param layer_dims: Input size, hidden sizes and output size
        :param rng: The random source
        :param activation: The hidden-layer activation
        :return: A network whose parameters are drawn uniformly from
            ``[-1/sqrt(fan_in), 1/sqrt(fan_in)]``
        """
        weights = []
        biases = []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            biases.append(rng.uniform(-bound, bound, size=fan_out))
        return cls(layer_dims, weights, biases, activation)

    @classmethod
    def zeros(
            cls,
            layer_dims: Sequence[int],
            activation: Activation = Activation.SIGMOID
    ) -> 'Approximator':
        """

        :param layer_dims: Input size, hidden sizes and output size
        :param activation: The hidden-layer activation
        :return: A network whose parameters are all zero
        """
        return cls(
            layer_dims,
            [
                np.zeros((fan_out, fan_in))
                for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:])
            ],
            [np.zeros(fan_out) for fan_out in layer_dims[1:]],
            activation
        )

    @property
    def layer_dims(self) -> Tuple[int, ...]:
        return self._layer_dims

    @property
    def weights(self) -> List[np.ndarray]:
        return self._weights

    @property
    def biases(self) -> List[np.ndarray]:
        return self._biases

    @property
    def activation(self) -> Activation:
        return self._activation

    @property
    def input_dim(self) -> int:
        return self._layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self._layer_dims[-1]

    def parameters(self) -> Iterator[np.ndarray]:
        """

        :return: The parameter arrays: weights then bias of each layer,
            first layer first. The arrays are live; writing to them changes
            the model
        """
        for weight, bias in zip(self._weights, self._biases):
            yield weight
            yield bias

    def forward(self, x: np.ndarray) -> np.ndarray:
        """

        :param x: An input vector or a batch of input rows
        :return: The network output, a vector or one row per input row
        :raises ShapeMismatch: If the input width is not ``input_dim``
        """
        batch, single = self._as_batch(x)
        output = self._trace(batch)[0][-1]
        return output[0] if single else output

    def backward(
            self,
            x: np.ndarray,
            upstream: np.ndarray,
            input_gradient: bool = True
    ) -> Tuple[GradientSet, Optional[np.ndarray]]:
        """
        Reverse-mode differentiation of ``<upstream, forward(x)>``.

        :param x: An input vector or a batch of input rows
        :param upstream: The gradient of the objective with respect to the
            output, in the same layout as ``forward(x)``
        :param input_gradient: Set to ``False`` to skip the gradient with
            respect to ``x``
        :return: The parameter gradients, summed over the batch, and the
            gradient with respect to ``x`` (``None`` if skipped)
        :raises ShapeMismatch: If the input or upstream shapes are wrong
        """
        batch, single = self._as_batch(x)
        delta = np.array(upstream, dtype=np.float64)
        if single:
            delta = delta.reshape(1, -1)
        if delta.shape != (batch.shape[0], self.output_dim):
            raise ShapeMismatch(
                'Upstream gradient has shape %s, expected %s' % (
                    np.shape(upstream), (batch.shape[0], self.output_dim)
                )
            )

        activations, pre_activations = self._trace(batch)
        weight_grads = [None] * len(self._weights)  # type: List[Any]
        bias_grads = [None] * len(self._biases)  # type: List[Any]
        for layer in reversed(range(len(self._weights))):
            weight_grads[layer] = delta.T @ activations[layer]
            bias_grads[layer] = delta.sum(axis=0)
            if layer == 0 and not input_gradient:
                break
            delta = delta @ self._weights[layer]
            if layer > 0:
                delta = delta * self._activation.derivative(
                    pre_activations[layer - 1], activations[layer]
                )

        grads = GradientSet(weight_grads, bias_grads)
        if not input_gradient:
            return grads, None
        return grads, (delta[0] if single else delta)

    def copy(self) -> 'Approximator':
        """

        :return: A deep copy sharing no arrays with this network
        """
        return self.__class__(
            self._layer_dims,
            [weight.copy() for weight in self._weights],
            [bias.copy() for bias in self._biases],
            self._activation
        )

    def to_dict(self) -> Dict[str, Any]:
        """

        :return: A JSON-serializable description of the network. Weights are
            nested row-major lists
        """
        return {
            'layer_dims': list(self._layer_dims),
            'activation': self._activation.value,
            'weights': [weight.tolist() for weight in self._weights],
            'biases': [bias.tolist() for bias in self._biases],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Approximator':
        """

        :param data: A description made by :meth:`to_dict`
        :return: The network it describes
        """
        return cls(
            data['layer_dims'],
            [np.array(weight, dtype=np.float64) for weight in data['weights']],
            [np.array(bias, dtype=np.float64) for bias in data['biases']],
            Activation(data['activation'])
        )

    def _trace(
            self, batch: np.ndarray
    ) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """
        Run the forward pass, remembering every layer's input and every
        hidden pre-activation. ``activations[-1]`` is the output.
        """
        activations = [batch]
        pre_activations = []
        last = len(self._weights) - 1
        for layer, (weight, bias) in enumerate(
                zip(self._weights, self._biases)
        ):
            z = activations[-1] @ weight.T + bias
            if layer == last:
                activations.append(z)
            else:
                pre_activations.append(z)
                activations.append(self._activation.apply(z))
        return activations, pre_activations

    def _as_batch(self, x: np.ndarray) -> Tuple[np.ndarray, bool]:
        array = np.asarray(x, dtype=np.float64)
        single = array.ndim == 1
        if single:
            array = array.reshape(1, -1)
        if array.ndim != 2 or array.shape[1] != self.input_dim:
            raise ShapeMismatch(
                'Input has shape %s, expected width %d' % (
                    np.shape(x), self.input_dim
                )
            )
        return array, single

    def _check_consistency(self) -> None:
        layers = len(self._layer_dims) - 1
        if layers < 1:
            raise ShapeMismatch('An approximator needs at least one layer')
        if len(self._weights) != layers or len(self._biases) != layers:
            raise ShapeMismatch(
                'Expected %d weight matrices and bias vectors, got %d and %d'
                % (layers, len(self._weights), len(self._biases))
            )
        for layer in range(layers):
            expected = (self._layer_dims[layer + 1], self._layer_dims[layer])
            if self._weights[layer].shape != expected:
                raise ShapeMismatch(
                    'Weight %d has shape %s, expected %s' % (
                        layer, self._weights[layer].shape, expected
                    )
                )
            if self._biases[layer].shape != expected[:1]:
                raise ShapeMismatch(
                    'Bias %d has shape %s, expected %s' % (
                        layer, self._biases[layer].shape, expected[:1]
                    )
                )
        if not all(np.all(np.isfinite(array)) for array in self.parameters()):
            raise ValueError('Approximator parameters must be finite')

    def __repr__(self) -> str:
        return '{0}(layer_dims={1}, activation={2})'.format(
            self.__class__.__name__, self._layer_dims,
            self._activation.value
        )
