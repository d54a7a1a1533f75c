r"""
Implements the continuous acyclicity function

.. math::

    h(W) = \operatorname{tr}\left(e^{W \circ W}\right) - d

which is zero exactly when the support of a nonnegative weighted adjacency is
a directed acyclic graph, and positive otherwise. The matrix exponential is
evaluated by :func:`scipy.linalg.expm` (scaling and squaring).
"""
from typing import Tuple

import numpy as np
from scipy.linalg import expm


def acyclicity(w: np.ndarray) -> Tuple[float, np.ndarray]:
    """

    :param w: A square nonnegative weight matrix
    :return: ``h(W)`` together with ``exp(W o W)``, which the gradient reuses
    """
    matrix = np.asarray(w, dtype=np.float64)
    exponential = expm(matrix * matrix)
    return float(np.trace(exponential) - matrix.shape[0]), exponential


def acyclicity_h(w: np.ndarray) -> float:
    """

    :param w: A square nonnegative weight matrix
    :return: ``tr(exp(W o W)) - d``
    """
    return acyclicity(w)[0]


def acyclicity_grad(w: np.ndarray) -> np.ndarray:
    """

    :param w: A square nonnegative weight matrix
    :return: The gradient ``exp(W o W)^T o 2W`` of :func:`acyclicity_h`
    """
    matrix = np.asarray(w, dtype=np.float64)
    return acyclicity(matrix)[1].T * 2.0 * matrix
