"""
Contains the Triggers gridworld: a deterministic world of walls, keys and
locks seen through an object-oriented attribute vector.
"""
from .attributes import Action, COLUMN_NAMES, STATE_COLUMNS, OUTCOME_COLUMNS
from .triggers import CellKind, Cell, Palette, GridSpec, EnvState, StepOutcome
from .triggers import Transition, act
from .triggers import reset, step, observe, reachable_states, optimal_return
from .layouts import random_layout, parse_layout, format_layout, is_solvable
