r"""
Implements the nonparametric continuous-optimization structure learner. Every
column ``X_j`` gets its own small network ``f_j`` that predicts it from the
other columns, and the strength of the edge ``X_k -> X_j`` is read off the
first layer of ``f_j``. Training minimizes

.. math::

    L(\Phi) + \frac{\rho}{2} h(W(\Phi))^2 + \alpha h(W(\Phi))

by dual ascent on ``alpha`` and ``rho`` until the acyclicity function ``h``
vanishes, so the learned edges form a DAG.

All fitting happens on standardized columns. Adjacencies are therefore
measured in standardized units, and :meth:`NotearsModel.predict` maps outputs
back to raw units.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterator, List, Mapping, NamedTuple
from typing import Optional, Sequence, Tuple

import numpy as np

from csm.environments.attributes import Action, AGENT_X_NEXT, AGENT_Y_NEXT
from csm.environments.attributes import COLUMN_NAMES, REWARD, STATE_DIM
from csm.exceptions import CyclicAfterThreshold, DidNotConverge
from csm.exceptions import InsufficientData, InvalidConfig
from csm.exceptions import MissingActionData, NonFiniteGradient
from csm.exceptions import ShapeMismatch, StructureLearningError
from csm.interfaces import Parametrized, Prediction
from csm.networks import Activation, Adam, Approximator, GradientSet
from csm.structure.acyclicity import acyclicity, acyclicity_h
from csm.structure.dataset import Dataset
from csm.structure.graph import DEFAULT_THRESHOLD, LearnedGraph
from csm.structure.graph import WeightedAdjacency, threshold
from csm.structure.mask import StructuralMask

log = logging.getLogger(__name__)


class NotearsConfig(NamedTuple):
    """
    Hyperparameters of :func:`fit`. ``hidden = 0`` makes every ``f_j``
    linear.
    """
    lambda1: float = 0.01
    lambda2: float = 0.01
    rho: float = 1.0
    rho_max: float = 1e16
    h_tol: float = 1e-8
    max_outer: int = 100
    step_size: float = 1e-2
    step_decay: float = 0.5
    min_step_size: float = 1e-5
    max_inner_steps: int = 5000
    grad_tol: float = 1e-6
    obj_tol: float = 1e-6
    check_every: int = 100
    hidden: int = 10
    min_samples: int = 1000
    seed: int = 0

    def check(self) -> None:
        """
        :raises InvalidConfig: If a field is outside its range
        """
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise InvalidConfig('Regularization weights must be nonnegative')
        if not 0 < self.rho < self.rho_max:
            raise InvalidConfig(
                'Need 0 < rho < rho_max, got rho=%g and rho_max=%g' % (
                    self.rho, self.rho_max
                )
            )
        if self.h_tol <= 0 or self.grad_tol < 0 or self.obj_tol < 0:
            raise InvalidConfig('Tolerances must be positive')
        if self.step_size <= 0 or self.min_step_size <= 0:
            raise InvalidConfig('Step sizes must be positive')
        if not 0 < self.step_decay <= 1:
            raise InvalidConfig(
                'step_decay must lie in (0, 1], got %g' % self.step_decay
            )
        if self.max_outer < 1 or self.max_inner_steps < 1 or \
                self.check_every < 1:
            raise InvalidConfig('Iteration limits must be at least 1')
        if self.hidden < 0 or self.min_samples < 1:
            raise InvalidConfig(
                'hidden must be nonnegative and min_samples positive'
            )


class FitReport(NamedTuple):
    """
    How a call to :func:`fit` ended
    """
    outer_iterations: int
    h: float
    rho: float
    alpha: float
    objective: float
    converged: bool
    history: Tuple[float, ...] = ()


class StackedNetworks(Parametrized):
    """
    The parameters of ``d`` networks of identical shape, stacked along a
    leading column axis so that all of them run as one locally connected
    layer per depth. Entry ``j`` of every array belongs to ``f_j``: the first
    weight array has shape ``(d, hidden, d)``, later ones
    ``(d, fan_out, fan_in)``.
    """
    def __init__(
            self,
            weights: Sequence[np.ndarray],
            biases: Sequence[np.ndarray],
            activation: Activation = Activation.SIGMOID
    ) -> None:
        self._weights = [np.array(w, dtype=np.float64) for w in weights]
        self._biases = [np.array(b, dtype=np.float64) for b in biases]
        self._activation = Activation(activation)

    @classmethod
    def from_approximators(
            cls, approximators: Sequence[Approximator]
    ) -> 'StackedNetworks':
        """

        :param approximators: Networks sharing their layer dimensions and
            activation
        :return: Their parameters, copied into stacked arrays
        """
        layers = len(approximators[0].weights)
        return cls(
            [np.stack([a.weights[layer] for a in approximators])
             for layer in range(layers)],
            [np.stack([a.biases[layer] for a in approximators])
             for layer in range(layers)],
            approximators[0].activation
        )

    @property
    def weights(self) -> List[np.ndarray]:
        return self._weights

    @property
    def biases(self) -> List[np.ndarray]:
        return self._biases

    @property
    def d(self) -> int:
        return self._weights[0].shape[0]

    def parameters(self) -> Iterator[np.ndarray]:
        for weight, bias in zip(self._weights, self._biases):
            yield weight
            yield bias

    def views(self, layer_dims: Sequence[int]) -> List[Approximator]:
        """

        :param layer_dims: The layer dimensions of every network
        :return: One approximator per column whose parameters are slices of
            the stacked arrays
        """
        return [
            Approximator(
                layer_dims, [weight[column] for weight in self._weights],
                [bias[column] for bias in self._biases], self._activation,
                copy=False
            )
            for column in range(self.d)
        ]

    def split(self, grads: GradientSet) -> List[GradientSet]:
        """

        :param grads: A gradient of the stacked arrays
        :return: The gradient of each network
        """
        return [
            GradientSet(
                [weight[column] for weight in grads.weights],
                [bias[column] for bias in grads.biases]
            )
            for column in range(self.d)
        ]

    def forward(self, x: np.ndarray) -> np.ndarray:
        """

        :param x: A batch of ``n`` standardized rows
        :return: An ``(n, d)`` array; column ``j`` is the output of ``f_j``
        """
        return self._trace(x)[0][-1][:, :, 0]

    def backward(self, x: np.ndarray, upstream: np.ndarray) -> GradientSet:
        """
        Reverse-mode differentiation of ``<upstream, forward(x)>``

        :param x: A batch of ``n`` standardized rows
        :param upstream: The ``(n, d)`` gradient with respect to the outputs
        :return: The gradient of the stacked arrays, summed over the batch
        """
        activations, pre_activations = self._trace(x)
        delta = upstream[:, :, None]
        weight_grads = [None] * len(self._weights)  # type: List[Any]
        bias_grads = [None] * len(self._biases)  # type: List[Any]
        for layer in reversed(range(len(self._weights))):
            bias_grads[layer] = delta.sum(axis=0)
            if layer == 0:
                n, d, fan_out = delta.shape
                weight_grads[0] = (
                    delta.reshape(n, d * fan_out).T @ x
                ).reshape(d, fan_out, x.shape[1])
                break
            weight_grads[layer] = np.einsum(
                'njo,nji->joi', delta, activations[layer]
            )
            delta = np.einsum('njo,joi->nji', delta, self._weights[layer])
            delta = delta * self._activation.derivative(
                pre_activations[layer - 1], activations[layer]
            )
        return GradientSet(weight_grads, bias_grads)

    def _trace(
            self, x: np.ndarray
    ) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """
        Run the forward pass. ``activations[0]`` is the shared input,
        every later entry has shape ``(n, d, width)``.
        """
        n = x.shape[0]
        first = self._weights[0]
        d, fan_out, fan_in = first.shape
        z = (x @ first.reshape(d * fan_out, fan_in).T).reshape(
            n, d, fan_out
        ) + self._biases[0]
        activations = [x]
        pre_activations = []
        for weight, bias in zip(self._weights[1:], self._biases[1:]):
            pre_activations.append(z)
            activations.append(self._activation.apply(z))
            z = np.einsum('nji,joi->njo', activations[-1], weight) + bias
        activations.append(z)
        return activations, pre_activations

    def __repr__(self) -> str:
        return '{0}(shapes={1})'.format(
            self.__class__.__name__, [w.shape for w in self._weights]
        )


class NotearsModel(object):
    """
    One network per column, all reading the full standardized row. The first
    layer columns of ``f_j`` that the mask bans as parents of ``j`` are held
    at exactly zero.

    The networks are stored together in a :class:`StackedNetworks`;
    :attr:`approximators` are views into it, so writing to their parameters
    changes the model.
    """
    def __init__(
            self,
            approximators: Sequence[Approximator],
            mask: StructuralMask,
            lambda1: float = 0.01,
            lambda2: float = 0.01,
            action: Optional[Action] = None,
            column_names: Optional[Sequence[str]] = None,
            means: Optional[np.ndarray] = None,
            stds: Optional[np.ndarray] = None,
            report: Optional[FitReport] = None
    ) -> None:
        """

        :param approximators: ``f_1`` to ``f_d``, each mapping ``d`` inputs
            to one output
        :param mask: The permitted edges
        :param lambda1: The weight of the L1 penalty on first-layer weights
        :param lambda2: The weight of the squared L2 penalty on all
            parameters
        :param action: The action whose data the model describes
        :param column_names: The names of the columns, canonical if omitted
            and ``d`` is 19
        :param means: Column means used for standardization, zero if omitted
        :param stds: Column standard deviations, one if omitted
        :param report: How the model was fitted, if it was
        :raises ShapeMismatch: If the networks or mask disagree on ``d``
        """
        approximators = list(approximators)
        self._mask = mask
        self.lambda1 = float(lambda1)
        self.lambda2 = float(lambda2)
        self._action = None if action is None else Action(action)
        d = mask.d
        if column_names is None:
            column_names = COLUMN_NAMES if d == len(COLUMN_NAMES) else [
                'X%d' % k for k in range(d)
            ]
        self._column_names = tuple(column_names)
        self._means = np.zeros(d) if means is None else \
            np.array(means, dtype=np.float64)
        self._stds = np.ones(d) if stds is None else \
            np.array(stds, dtype=np.float64)
        self.report = report
        self._check_consistency(approximators)
        self._networks = StackedNetworks.from_approximators(approximators)
        self._approximators = self._networks.views(
            approximators[0].layer_dims
        )
        self.project()

    @classmethod
    def initialize(
            cls,
            mask: StructuralMask,
            rng: np.random.Generator,
            hidden: int = 10,
            **kwargs: Any
    ) -> 'NotearsModel':
        """

        :param mask: The permitted edges
        :param rng: The random source for the initial weights
        :param hidden: The width of the hidden layer, 0 for linear networks
        :param kwargs: Passed on to the constructor
        :return: A model with randomly drawn, masked weights
        """
        dims = _layer_dims(mask.d, hidden)
        return cls(
            [
                Approximator.initialize(dims, rng, Activation.SIGMOID)
                for _ in range(mask.d)
            ],
            mask, **kwargs
        )

    @classmethod
    def zeros(
            cls, mask: StructuralMask, hidden: int = 10, **kwargs: Any
    ) -> 'NotearsModel':
        """

        :param mask: The permitted edges
        :param hidden: The width of the hidden layer, 0 for linear networks
        :param kwargs: Passed on to the constructor
        :return: A model whose parameters are all zero
        """
        dims = _layer_dims(mask.d, hidden)
        return cls(
            [Approximator.zeros(dims, Activation.SIGMOID)
             for _ in range(mask.d)],
            mask, **kwargs
        )

    @property
    def approximators(self) -> List[Approximator]:
        return self._approximators

    @property
    def networks(self) -> StackedNetworks:
        return self._networks

    @property
    def mask(self) -> StructuralMask:
        return self._mask

    @property
    def action(self) -> Optional[Action]:
        return self._action

    @property
    def column_names(self) -> Tuple[str, ...]:
        return self._column_names

    @property
    def d(self) -> int:
        return self._mask.d

    @property
    def means(self) -> np.ndarray:
        return self._means

    @property
    def stds(self) -> np.ndarray:
        return self._stds

    def project(self) -> None:
        """
        Zero the first-layer columns of every network that the mask bans
        """
        first = self._networks.weights[0]
        banned = ~self._mask.allowed.T[:, None, :]
        first[np.broadcast_to(banned, first.shape)] = 0.0

    def adjacency(self) -> WeightedAdjacency:
        """

        :return: The matrix whose entry ``(k, j)`` is the L2 norm of column
            ``k`` of the first-layer weights of ``f_j``
        """
        return WeightedAdjacency(self._first_layer_norms(), self._column_names)

    def standardize(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows, dtype=np.float64) - self._means) / self._stds

    def predict_row(self, row: np.ndarray) -> np.ndarray:
        """

        :param row: A full row of ``d`` raw values
        :return: What every network predicts for its column, in raw units
        """
        x = self.standardize(row)
        outputs = self._networks.forward(x[None, :])[0]
        return outputs * self._stds + self._means

    def predict(self, attributes: np.ndarray) -> Prediction:
        """
        Predict the outcome of acting from a Triggers attribute vector. The
        outcome columns of the input row are zero; they are never parents.

        :param attributes: The 16 time-``t`` attributes in canonical order
        :return: The predicted reward, and the predicted agent position
            rounded to the nearest cell
        :raises ShapeMismatch: If the model was not trained on Triggers
            transition rows, or the vector has the wrong length
        """
        if self._column_names != COLUMN_NAMES:
            raise ShapeMismatch(
                'Only models of Triggers transitions predict outcomes'
            )
        values = np.asarray(attributes, dtype=np.float64)
        if values.shape != (STATE_DIM,):
            raise ShapeMismatch(
                'Expected %d attributes, got shape %s' % (
                    STATE_DIM, values.shape
                )
            )
        outputs = self.predict_row(
            np.concatenate((values, np.zeros(self.d - STATE_DIM)))
        )[[REWARD, AGENT_X_NEXT, AGENT_Y_NEXT]]
        return Prediction(
            float(outputs[0]),
            (int(np.rint(outputs[1])), int(np.rint(outputs[2])))
        )

    def copy(self) -> 'NotearsModel':
        return self.__class__(
            [approximator.copy() for approximator in self._approximators],
            self._mask, self.lambda1, self.lambda2, self._action,
            self._column_names, self._means.copy(), self._stds.copy(),
            self.report
        )

    def to_dict(self) -> Dict[str, Any]:
        """

        :return: A JSON-serializable description of the model
        """
        data = {
            'action': None if self._action is None else self._action.label,
            'column_names': list(self._column_names),
            'lambda1': self.lambda1,
            'lambda2': self.lambda2,
            'approximators': [
                approximator.to_dict() for approximator in self._approximators
            ],
            'mask': self._mask.to_list(),
            'standardization': {
                'means': self._means.tolist(),
                'stds': self._stds.tolist(),
            },
        }  # type: Dict[str, Any]
        if self.report is not None:
            data['report'] = self.report._asdict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'NotearsModel':
        """

        :param data: A description made by :meth:`to_dict`
        :return: The model it describes
        :raises KeyError: If a required field is missing
        """
        action = data.get('action')
        report = data.get('report')
        return cls(
            [Approximator.from_dict(entry) for entry in data['approximators']],
            StructuralMask(np.array(data['mask'], dtype=bool)),
            data['lambda1'],
            data['lambda2'],
            None if action is None else Action.parse(action),
            data['column_names'],
            data['standardization']['means'],
            data['standardization']['stds'],
            None if report is None else FitReport(
                **dict(report, history=tuple(report.get('history', ())))
            )
        )

    def __reduce__(self) -> Tuple[Any, ...]:
        return self.__class__, (
            self._approximators, self._mask, self.lambda1, self.lambda2,
            self._action, self._column_names, self._means, self._stds,
            self.report
        )

    def _first_layer_norms(self) -> np.ndarray:
        return np.linalg.norm(self._networks.weights[0], axis=1).T

    def _check_consistency(self, approximators: List[Approximator]) -> None:
        d = self._mask.d
        if len(approximators) != d:
            raise ShapeMismatch(
                'A mask over %d columns needs %d networks, got %d' % (
                    d, d, len(approximators)
                )
            )
        first = approximators[0]
        for approximator in approximators:
            if approximator.input_dim != d or approximator.output_dim != 1:
                raise ShapeMismatch(
                    'Every network must map %d inputs to 1 output, got %s' % (
                        d, approximator.layer_dims
                    )
                )
            if approximator.layer_dims != first.layer_dims or \
                    approximator.activation is not first.activation:
                raise ShapeMismatch(
                    'Every network must share layer_dims %s and activation %s'
                    % (first.layer_dims, first.activation.value)
                )
        if len(self._column_names) != d or self._means.shape != (d,) or \
                self._stds.shape != (d,):
            raise ShapeMismatch(
                'Column names and standardization must have %d entries' % d
            )
        if np.any(self._stds <= 0):
            raise ValueError('Standard deviations must be positive')

    def __repr__(self) -> str:
        return '{0}(action={1}, d={2}, layer_dims={3})'.format(
            self.__class__.__name__,
            None if self._action is None else self._action.label,
            self.d, self._approximators[0].layer_dims
        )


def loss(
        model: NotearsModel, data: Dataset
) -> Tuple[float, List[GradientSet]]:
    """
    The regularized reconstruction loss

    ``(1/n) sum_j sum_rows 1/2 (x_j - f_j(x))^2 + lambda1 |first layers|_1 +
    lambda2 |all parameters|_2^2``

    evaluated on the standardized data.

    :param model: The model to score
    :param data: The data to score it on
    :return: The loss and one gradient per network. Gradients of banned
        first-layer entries are zero, and the L1 subgradient at zero is zero
    :raises ShapeMismatch: If the data set and the model have different
        widths
    """
    if data.d != model.d:
        raise ShapeMismatch(
            'The data set has %d columns but the model %d' % (data.d, model.d)
        )
    value, grads = _loss(model, model.standardize(data.rows))
    return value, model.networks.split(grads)


def fit(
        data: Dataset,
        mask: StructuralMask,
        config: NotearsConfig = NotearsConfig()
) -> NotearsModel:
    """
    Learn a DAG-constrained model of one action's data by the augmented
    Lagrangian method. Each outer iteration solves the penalized problem with
    a fresh Adam optimizer, raising ``rho`` tenfold until ``h`` shrinks to a
    quarter of its previous value, then updates ``alpha``. The inner step
    size decays after every outer iteration.

    :param data: The data set of one action
    :param mask: The permitted edges
    :param config: The hyperparameters
    :return: The fitted model, with its :class:`FitReport` attached
    :raises InsufficientData: If the data set has fewer rows than
        ``config.min_samples``
    :raises DidNotConverge: If ``h`` is still above ``config.h_tol`` when
        the loop stops. The model with the smallest ``h`` is attached
    :raises ShapeMismatch: If the mask and the data disagree on ``d``
    """
    config.check()
    if data.n < config.min_samples:
        raise InsufficientData(
            'Need at least %d rows, got %d' % (config.min_samples, data.n),
            data.action
        )
    if mask.d != data.d:
        raise ShapeMismatch(
            'The mask covers %d columns, the data set has %d' % (
                mask.d, data.d
            )
        )

    means, stds = data.standardization()
    model = NotearsModel.initialize(
        mask, np.random.default_rng(config.seed), config.hidden,
        lambda1=config.lambda1, lambda2=config.lambda2, action=data.action,
        column_names=data.column_names, means=means, stds=stds
    )
    x = model.standardize(data.rows)

    rho, alpha, h = config.rho, 0.0, np.inf
    step_size = config.step_size
    best, best_h = model.copy(), np.inf
    history = []  # type: List[float]
    objective = np.inf
    outer = 0
    for outer in range(1, config.max_outer + 1):
        h_new = h
        while rho < config.rho_max:
            try:
                objective = _solve_penalized(
                    model, x, rho, alpha, step_size, config
                )
            except NonFiniteGradient:
                log.warning('Gradient overflowed at rho=%g', rho)
                raise _stalled(
                    best, best_h, outer, rho, alpha, history, data
                )
            h_new = acyclicity_h(model.adjacency())
            log.debug(
                'outer %d: rho=%.3g alpha=%.3g h=%.6g objective=%.6g',
                outer, rho, alpha, h_new, objective
            )
            if h_new > 0.25 * h:
                rho *= 10
            else:
                break
        alpha += rho * h_new
        h = h_new
        history.append(h)
        if h < best_h:
            best, best_h = model.copy(), h
        step_size = max(step_size * config.step_decay, config.min_step_size)
        if h <= config.h_tol or rho >= config.rho_max:
            break

    if best_h > config.h_tol:
        raise _stalled(best, best_h, outer, rho, alpha, history, data)

    best.report = FitReport(
        outer, best_h, rho, alpha, objective, True, tuple(history)
    )
    log.info(
        'Fitted %r in %d outer iterations, h=%.3g', best, outer, best_h
    )
    return best


def learn_all_actions(
        datasets: Mapping[Action, Dataset],
        mask: StructuralMask,
        config: NotearsConfig = NotearsConfig(),
        omega: float = DEFAULT_THRESHOLD,
        jobs: int = 1
) -> Dict[Action, Tuple[NotearsModel, LearnedGraph]]:
    """
    Fit one model per action, independently and with the same seed

    :param datasets: One data set per action
    :param mask: The permitted edges, shared by all actions
    :param config: The hyperparameters, shared by all actions
    :param omega: The edge threshold
    :param jobs: The number of worker processes. With 1 the fits run in this
        process
    :return: The fitted model and thresholded graph of each action
    :raises MissingActionData: If an action has no data set
    :raises StructureLearningError: If a fit fails; the error names the
        action
    :raises CyclicAfterThreshold: If a graph is cyclic at ``omega``
    """
    for action in Action:
        if action not in datasets:
            raise MissingActionData(
                'No data set for action %s' % action.label, action
            )
    tasks = [(datasets[action], mask, config) for action in Action]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            models = list(pool.map(_fit_tagged, tasks))
    else:
        models = [_fit_tagged(task) for task in tasks]

    learned = {}
    for action, model in zip(Action, models):
        try:
            graph = threshold(model.adjacency(), omega)
        except CyclicAfterThreshold as error:
            raise CyclicAfterThreshold(
                'action %s: %s' % (action.label, error)
            ) from error
        learned[action] = (model, graph)
    return learned


def _fit_tagged(
        task: Tuple[Dataset, StructuralMask, NotearsConfig]
) -> NotearsModel:
    data, mask, config = task
    try:
        return fit(data, mask, config)
    except StructureLearningError as error:
        if error.action is None:
            error.action = data.action
        raise


def _stalled(
        best: NotearsModel,
        best_h: float,
        outer: int,
        rho: float,
        alpha: float,
        history: List[float],
        data: Dataset
) -> DidNotConverge:
    best.report = FitReport(
        outer, best_h, rho, alpha, np.nan, False, tuple(history)
    )
    return DidNotConverge(
        'Acyclicity stalled at h=%.3g after %d outer iterations (rho=%.3g)'
        % (best_h, outer, rho),
        best, best_h, data.action
    )


def _solve_penalized(
        model: NotearsModel,
        x: np.ndarray,
        rho: float,
        alpha: float,
        step_size: float,
        config: NotearsConfig
) -> float:
    """
    Minimize the augmented objective in place. Stops when the gradient norm
    drops below ``grad_tol``, when the objective stops moving between
    checkpoints, or after ``max_inner_steps`` steps.

    :return: The objective at the last evaluated point
    """
    optimizer = Adam(step_size)
    checkpoint = None  # type: Optional[float]
    objective = np.inf
    for iteration in range(1, config.max_inner_steps + 1):
        objective, grads = _augmented(model, x, rho, alpha)
        if grads.norm() <= config.grad_tol:
            break
        if iteration % config.check_every == 0:
            if checkpoint is not None and abs(checkpoint - objective) <= \
                    config.obj_tol * max(1.0, abs(objective)):
                break
            checkpoint = objective
        optimizer.step(model.networks, grads)
        model.project()
    return objective


def _augmented(
        model: NotearsModel, x: np.ndarray, rho: float, alpha: float
) -> Tuple[float, GradientSet]:
    """
    The loss plus ``rho/2 h^2 + alpha h`` and its gradient. With
    ``S = W o W`` and ``E = exp(S)``, ``dh/dS = E^T``, and ``S_kj`` is the
    squared norm of column ``k`` of the first layer of ``f_j``.
    """
    value, grads = _loss(model, x)
    h, exponential = acyclicity(model.adjacency().weights)
    value += 0.5 * rho * h * h + alpha * h
    scale = 2.0 * (rho * h + alpha)
    grads.weights[0] += scale * model.networks.weights[0] * \
        exponential[:, None, :]
    return value, grads


def _loss(
        model: NotearsModel, x: np.ndarray
) -> Tuple[float, GradientSet]:
    """
    The regularized loss of all networks at once and its gradient with
    respect to the stacked arrays
    """
    networks = model.networks
    residual = networks.forward(x) - x
    n = x.shape[0]
    value = 0.5 * float(np.sum(residual * residual)) / n
    grads = networks.backward(x, residual / n)
    first = networks.weights[0]
    value += model.lambda1 * float(np.abs(first).sum())
    grads.weights[0] += model.lambda1 * np.sign(first)
    for parameter, gradient in zip(networks.parameters(), grads.arrays()):
        value += model.lambda2 * float(np.sum(parameter * parameter))
        gradient += 2.0 * model.lambda2 * parameter
    banned = ~model.mask.allowed.T[:, None, :]
    grads.weights[0][np.broadcast_to(banned, first.shape)] = 0.0
    return value, grads


def _layer_dims(d: int, hidden: int) -> Tuple[int, ...]:
    return (d, hidden, 1) if hidden > 0 else (d, 1)
