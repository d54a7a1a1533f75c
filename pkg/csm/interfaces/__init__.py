"""
Contains abstract interfaces for components in this library. These are abstract
classes that raise :class:`python.NotImplementedError` for each abstract method
that they define. These classes also have no internal business logic or state,
making them safe for multiple inheritance.

The purpose of these classes is to expose the contract between the learners,
the planner and the transfer procedure. Anything implementing
:class:`DynamicsModel` can drive planning and structure mapping, whether it was
learned from data or written down from the rules of the world.

"""
from .optimizer import Optimizer, Parametrized
from .dynamics import DynamicsModel, DynamicsOracle, Prediction
