"""
Describes weighted and thresholded causal graphs over the columns of a data
set. Rows index parents and columns index children throughout, so entry
``(k, j)`` is the edge ``X_k -> X_j``.
"""
from typing import Any, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from csm.exceptions import CyclicAfterThreshold

DEFAULT_THRESHOLD = 0.3


class WeightedAdjacency(object):
    """
    A square matrix of nonnegative, finite edge strengths
    """
    def __init__(
            self,
            weights: np.ndarray,
            column_names: Optional[Sequence[str]] = None
    ) -> None:
        """

        :param weights: The edge strengths, parent on rows
        :param column_names: The name of each node. Defaults to ``X0``,
            ``X1``, ...
        :raises ValueError: If the matrix is not square, or has a negative or
            non-finite entry
        """
        self._weights = np.array(weights, dtype=np.float64, ndmin=2)
        self._weights.setflags(write=False)
        if column_names is None:
            column_names = ['X%d' % k for k in range(self._weights.shape[0])]
        self._column_names = tuple(column_names)
        self._check_consistency()

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def column_names(self) -> Tuple[str, ...]:
        return self._column_names

    @property
    def d(self) -> int:
        return self._weights.shape[0]

    def __getitem__(self, index: Any) -> Any:
        return self._weights[index]

    def __array__(self, dtype: Any = None, copy: Any = None) -> np.ndarray:
        if dtype is None:
            return self._weights.copy()
        return self._weights.astype(dtype)

    def _check_consistency(self) -> None:
        if self._weights.ndim != 2 or \
                self._weights.shape[0] != self._weights.shape[1]:
            raise ValueError(
                'Adjacencies must be square, got shape %s' % (
                    self._weights.shape,
                )
            )
        if len(self._column_names) != self._weights.shape[0]:
            raise ValueError(
                '%d column names given for %d nodes' % (
                    len(self._column_names), self._weights.shape[0]
                )
            )
        if not np.all(np.isfinite(self._weights)):
            raise ValueError('Adjacency weights must be finite')
        if np.any(self._weights < 0):
            raise ValueError('Adjacency weights must be nonnegative')

    def __repr__(self) -> str:
        return '{0}(d={1}, max={2:.4g})'.format(
            self.__class__.__name__, self.d,
            float(self._weights.max()) if self._weights.size else 0.0
        )


class LearnedGraph(object):
    """
    The directed acyclic graph left after thresholding a weighted adjacency
    """
    def __init__(
            self,
            edges: np.ndarray,
            omega: float,
            column_names: Sequence[str]
    ) -> None:
        """

        :param edges: A square boolean matrix, parent on rows
        :param omega: The threshold the edges were selected with
        :param column_names: The name of each node
        :raises CyclicAfterThreshold: If the edges contain a directed cycle
        """
        self._edges = np.array(edges, dtype=bool)
        self._edges.setflags(write=False)
        self._omega = float(omega)
        self._column_names = tuple(column_names)
        if not is_dag(self._edges):
            raise CyclicAfterThreshold(
                'Edges above %g still contain a cycle through %s; use a '
                'larger threshold' % (self._omega, self._cycle_names())
            )

    @property
    def adjacency(self) -> np.ndarray:
        return self._edges

    @property
    def omega(self) -> float:
        return self._omega

    @property
    def column_names(self) -> Tuple[str, ...]:
        return self._column_names

    def edges(self) -> List[Tuple[str, str]]:
        """

        :return: Every ``(parent, child)`` pair of the graph, in row-major
            order of the adjacency
        """
        return [
            (self._column_names[parent], self._column_names[child])
            for parent, child in zip(*np.nonzero(self._edges))
        ]

    def parents(self, name: str) -> List[str]:
        """

        :param name: A node name
        :return: The names of its parents in column order
        :raises ValueError: If the graph has no such node
        """
        child = self._column_names.index(name)
        return [
            self._column_names[parent]
            for parent in np.flatnonzero(self._edges[:, child])
        ]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self._column_names)
        graph.add_edges_from(self.edges())
        return graph

    def _cycle_names(self) -> List[str]:
        graph = nx.DiGraph(self._edges.astype(int))
        cycle = nx.find_cycle(graph)
        return [self._column_names[parent] for parent, _ in cycle]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LearnedGraph) and \
            self._column_names == other._column_names and \
            np.array_equal(self._edges, other._edges)

    def __repr__(self) -> str:
        return '{0}(nodes={1}, edges={2}, omega={3})'.format(
            self.__class__.__name__, len(self._column_names),
            int(self._edges.sum()), self._omega
        )


def is_dag(adjacency: np.ndarray) -> bool:
    """

    :param adjacency: A square matrix whose nonzero entries are edges, parent
        on rows
    :return: ``True`` iff the support has no directed cycle. Self-loops count
        as cycles
    """
    support = (np.asarray(adjacency) != 0).astype(int)
    return nx.is_directed_acyclic_graph(nx.DiGraph(support))


def threshold(
        w: WeightedAdjacency, omega: float = DEFAULT_THRESHOLD
) -> LearnedGraph:
    """

    :param w: The weighted adjacency to sparsify
    :param omega: Edges need a weight strictly above this
    :return: The thresholded graph
    :raises ValueError: If ``omega`` is not positive
    :raises CyclicAfterThreshold: If a cycle survives the threshold
    """
    if not omega > 0:
        raise ValueError('The threshold must be positive, got %r' % omega)
    return LearnedGraph(w.weights > omega, omega, w.column_names)
