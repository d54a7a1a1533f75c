"""
Library for learning per-action causal dynamics models of an object-oriented
gridworld, planning with them, and transferring them to perceptually permuted
variants of the world by mapping object colors with identical causal behavior.

The :mod:`csm.interfaces` package contains the contracts shared between the
components, defined in the form of Python abstract classes that have no
implemented methods. Concrete implementations live in the sibling packages:

* :mod:`csm.environments` - the Triggers gridworld
* :mod:`csm.networks` - small multilayer perceptrons with analytic gradients
* :mod:`csm.structure` - acyclicity-constrained structure learning
* :mod:`csm.planning` - random-shooting model-predictive control
* :mod:`csm.agents` - Q-learning and the combined planning agent
* :mod:`csm.transfer` - structure mapping between source and target worlds

Type consistency is checked by ``mypy``.

"""
