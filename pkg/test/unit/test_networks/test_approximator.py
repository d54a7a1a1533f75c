"""
Contains tests for forward and reverse passes through approximators
"""
import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import just

from csm.exceptions import ShapeMismatch
from csm.networks import Activation, Approximator, GradientSet
from test.unit.generators import ApproximatorInput, approximator_inputs
from test.unit.generators import approximators

FD_STEP = 1e-5


def _objective(model: Approximator, x: np.ndarray, upstream: np.ndarray):
    return float(np.sum(upstream * model.forward(x)))


class TestApproximator(unittest.TestCase):
    """
    Contains a small two-layer sigmoid network with hand-set weights
    """
    @property
    def two_layer(self) -> Approximator:
        return Approximator(
            (2, 2, 1),
            [np.array([[1.0, -1.0], [0.5, 2.0]]), np.array([[2.0, -3.0]])],
            [np.array([0.0, -1.0]), np.array([0.5])],
            Activation.SIGMOID
        )

    @property
    def linear(self) -> Approximator:
        return Approximator(
            (3, 2),
            [np.array([[1.0, 2.0, 3.0], [-1.0, 0.5, 0.0]])],
            [np.array([0.25, -0.5])]
        )


class TestConstructor(TestApproximator):
    def test_wrong_weight_shape(self) -> None:
        with self.assertRaises(ShapeMismatch):
            Approximator((2, 1), [np.zeros((2, 1))], [np.zeros(1)])

    def test_missing_layer(self) -> None:
        with self.assertRaises(ShapeMismatch):
            Approximator((2, 3, 1), [np.zeros((3, 2))], [np.zeros(3)])

    def test_non_finite(self) -> None:
        with self.assertRaises(ValueError):
            Approximator((1, 1), [np.array([[np.nan]])], [np.zeros(1)])

    def test_initialize_bounds(self) -> None:
        model = Approximator.initialize((4, 3), np.random.default_rng(0))
        self.assertTrue(np.all(np.abs(model.weights[0]) <= 0.5))

    def test_initialize_seeded(self) -> None:
        first = Approximator.initialize((4, 5, 2), np.random.default_rng(9))
        second = Approximator.initialize((4, 5, 2), np.random.default_rng(9))
        for a, b in zip(first.parameters(), second.parameters()):
            np.testing.assert_array_equal(a, b)


class TestForward(TestApproximator):
    def test_zeros(self) -> None:
        model = Approximator.zeros((3, 4, 2))
        np.testing.assert_array_equal(
            np.zeros(2), model.forward(np.array([1.0, -2.0, 3.0]))
        )

    def test_linear(self) -> None:
        x = np.array([1.0, -1.0, 2.0])
        expected = self.linear.weights[0] @ x + self.linear.biases[0]
        np.testing.assert_allclose(expected, self.linear.forward(x))

    def test_two_layer(self) -> None:
        def sigmoid(z: float) -> float:
            return 1.0 / (1.0 + math.exp(-z))

        first = sigmoid(1.0 * 1 + -1.0 * 0 + 0.0)
        second = sigmoid(0.5 * 1 + 2.0 * 0 - 1.0)
        expected = 2.0 * first - 3.0 * second + 0.5
        output = self.two_layer.forward(np.array([1.0, 0.0]))
        self.assertEqual((1,), output.shape)
        self.assertAlmostEqual(expected, output[0], places=12)

    def test_batch_matches_rows(self) -> None:
        rows = np.array([[1.0, 0.0], [0.3, -0.7], [2.0, 2.0]])
        batch = self.two_layer.forward(rows)
        for row, output in zip(rows, batch):
            np.testing.assert_allclose(self.two_layer.forward(row), output)

    def test_superposition(self) -> None:
        x = np.array([0.5, -1.5, 2.0])
        y = np.array([-3.0, 0.25, 1.0])
        origin = self.linear.forward(np.zeros(3))
        np.testing.assert_allclose(
            self.linear.forward(x + y) - origin,
            (self.linear.forward(x) - origin) +
            (self.linear.forward(y) - origin),
            atol=1e-12
        )

    def test_wrong_width(self) -> None:
        with self.assertRaises(ShapeMismatch):
            self.linear.forward(np.zeros(4))

    @given(approximator_inputs())
    def test_deterministic(self, case: ApproximatorInput) -> None:
        np.testing.assert_array_equal(
            case.approximator.forward(case.x),
            case.approximator.forward(case.x)
        )


class TestBackward(TestApproximator):
    def test_linear_unit_upstream(self) -> None:
        x = np.array([1.0, -1.0, 2.0])
        for k in range(2):
            upstream = np.eye(2)[k]
            grads, input_grad = self.linear.backward(x, upstream)
            np.testing.assert_array_equal(x, grads.weights[0][k])
            np.testing.assert_array_equal(
                np.zeros(3), grads.weights[0][1 - k]
            )
            np.testing.assert_array_equal(upstream, grads.biases[0])
            np.testing.assert_array_equal(
                self.linear.weights[0][k], input_grad
            )

    @given(approximator_inputs())
    def test_zero_upstream(self, case: ApproximatorInput) -> None:
        grads, input_grad = case.approximator.backward(
            case.x, np.zeros_like(case.upstream)
        )
        self.assertEqual(0.0, grads.norm())
        np.testing.assert_array_equal(np.zeros_like(case.x), input_grad)

    def test_skip_input_gradient(self) -> None:
        _, input_grad = self.linear.backward(
            np.ones(3), np.ones(2), input_gradient=False
        )
        self.assertIsNone(input_grad)

    def test_wrong_upstream(self) -> None:
        with self.assertRaises(ShapeMismatch):
            self.linear.backward(np.ones(3), np.ones(3))

    @given(approximator_inputs(
        networks=approximators(activations=just(Activation.SIGMOID))
    ))
    @settings(deadline=None)
    def test_finite_differences(self, case: ApproximatorInput) -> None:
        model, x, upstream = case
        grads, input_grad = model.backward(x, upstream)
        for parameter, analytic in zip(model.parameters(), grads.arrays()):
            numeric = np.zeros_like(parameter)
            for index in np.ndindex(parameter.shape):
                saved = parameter[index]
                parameter[index] = saved + FD_STEP
                above = _objective(model, x, upstream)
                parameter[index] = saved - FD_STEP
                below = _objective(model, x, upstream)
                parameter[index] = saved
                numeric[index] = (above - below) / (2 * FD_STEP)
            np.testing.assert_allclose(analytic, numeric, rtol=1e-4,
                                       atol=1e-6)

        numeric_input = np.zeros_like(x)
        for index in np.ndindex(x.shape):
            shifted = x.copy()
            shifted[index] += FD_STEP
            above = _objective(model, shifted, upstream)
            shifted[index] -= 2 * FD_STEP
            below = _objective(model, shifted, upstream)
            numeric_input[index] = (above - below) / (2 * FD_STEP)
        np.testing.assert_allclose(input_grad, numeric_input, rtol=1e-4,
                                   atol=1e-6)


class TestGradientSet(TestApproximator):
    def test_zeros_like(self) -> None:
        grads = GradientSet.zeros_like(self.two_layer)
        self.assertEqual(0.0, grads.norm())
        self.assertEqual(
            [weight.shape for weight in self.two_layer.weights],
            [weight.shape for weight in grads.weights]
        )

    def test_arithmetic(self) -> None:
        grads = GradientSet([np.array([[3.0]])], [np.array([4.0])])
        self.assertAlmostEqual(5.0, grads.norm())
        self.assertAlmostEqual(10.0, (2 * grads).norm())
        self.assertAlmostEqual(10.0, (grads + grads).norm())

    def test_is_finite(self) -> None:
        grads = GradientSet([np.array([[np.inf]])], [np.array([0.0])])
        self.assertFalse(grads.is_finite())


class TestCopy(TestApproximator):
    def test_independent(self) -> None:
        model = self.two_layer
        duplicate = model.copy()
        duplicate.weights[0][0, 0] = 10.0
        self.assertEqual(1.0, model.weights[0][0, 0])

    def test_dict(self) -> None:
        restored = Approximator.from_dict(self.two_layer.to_dict())
        self.assertEqual(self.two_layer.layer_dims, restored.layer_dims)
        self.assertEqual(Activation.SIGMOID, restored.activation)
        for a, b in zip(self.two_layer.parameters(), restored.parameters()):
            np.testing.assert_array_equal(a, b)
