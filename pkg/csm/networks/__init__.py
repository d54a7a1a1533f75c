"""
Contains a minimal engine for small multilayer perceptrons with exact
analytic gradients. The structure learner uses one sigmoid network per
attribute; the Q-learning agent uses a ReLU network with one output per
action.
"""
from .activations import Activation
from .approximator import Approximator, GradientSet
from .optimizers import RMSProp, Adam
