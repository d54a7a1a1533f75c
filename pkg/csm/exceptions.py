"""
Describes exceptions
"""
from typing import Any, Optional


class InvalidSpec(ValueError):
    """
    Thrown if a grid specification does not describe a playable Triggers
    world: the boundary is not all wall, the agent start is missing or
    blocked, or there is no key or no lock
    """


class LayoutInfeasible(ValueError):
    """
    Thrown if a random layout cannot place the requested number of objects in
    the interior of the grid
    """


class SteppedTerminal(RuntimeError):
    """
    Thrown if an action is applied to a state that is already terminal
    """


class ShapeMismatch(ValueError):
    """
    Thrown if an input, gradient or parameter array does not have the shape
    that the approximator expects
    """


class NonFiniteGradient(ArithmeticError):
    """
    Thrown if an optimizer is asked to apply a gradient containing ``nan`` or
    ``inf``
    """


class StructureLearningError(Exception):
    """
    Base class for errors raised while learning a causal graph. Errors are
    tagged with the action whose data set was being fitted, if known.
    """
    def __init__(self, message: str, action: Optional[Any] = None) -> None:
        super().__init__(message)
        self.message = message
        self.action = action

    def __str__(self) -> str:
        if self.action is None:
            return self.message
        return 'action %s: %s' % (
            getattr(self.action, 'label', self.action), self.message
        )

    def __reduce__(self) -> Any:
        return self.__class__, (self.message, self.action)


class InsufficientData(StructureLearningError, ValueError):
    """
    Thrown if a data set has fewer rows than the configured minimum, or
    contains non-finite entries
    """


class DidNotConverge(StructureLearningError, RuntimeError):
    """
    Thrown if the augmented Lagrangian loop exhausts its penalty budget before
    the acyclicity function reaches its tolerance. The best model found so
    far is attached
    """
    def __init__(
            self,
            message: str,
            model: Any,
            h: float,
            action: Optional[Any] = None
    ) -> None:
        super().__init__(message, action)
        self.model = model
        self.h = h

    def __reduce__(self) -> Any:
        return self.__class__, (self.message, self.model, self.h, self.action)


class MissingActionData(StructureLearningError, LookupError):
    """
    Thrown if a per-action collection of data sets has no entry for one of
    the actions
    """


class CyclicAfterThreshold(ValueError):
    """
    Thrown if thresholding a weighted adjacency leaves a directed cycle. This
    signals that the threshold is too small for the fitted weights
    """


class UnresolvableMismatch(RuntimeError):
    """
    Thrown if a target object behaves like none of the source objects, which
    means the two worlds do not share their causal dynamics
    """
    def __init__(self, message: str, event: Any) -> None:
        super().__init__(message)
        self.event = event


class InvalidMapping(ValueError):
    """
    Thrown if two target colors are mapped to the same source color, which
    would leave the mapping without a one-to-one reading
    """


class InvalidConfig(ValueError):
    """
    Thrown if a run configuration contains an unknown key or a value outside
    the preconditions of the operation it configures
    """


class LogParseError(ValueError):
    """
    Thrown if a transition log, model file or layout file cannot be parsed
    """
    def __init__(self, message: str, path: str, line: int = 0) -> None:
        super().__init__('%s:%d: %s' % (path, line, message))
        self.path = path
        self.line = line
