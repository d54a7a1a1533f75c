"""
Contains the per-action causal structure learner
"""
from .dataset import Dataset, split_by_action
from .mask import StructuralMask
from .acyclicity import acyclicity_h, acyclicity_grad
from .graph import LearnedGraph, WeightedAdjacency
from .graph import DEFAULT_THRESHOLD, is_dag, threshold
from .notears import FitReport, NotearsConfig, NotearsModel, StackedNetworks
from .notears import fit, learn_all_actions, loss
