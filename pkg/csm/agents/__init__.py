"""
Contains the Q-learning agent and the agent that warms it up by planning
with a dynamics model
"""
from .replay import Batch, ReplayBuffer
from .dqn import DqnConfig, DqnTrainer, QNetworks, CurvePoint, TrainingResult
from .dqn import encode_attributes, encode_state, epsilon_schedule
from .dqn import epsilon_greedy, greedy, td_targets, td_update, sync_target
from .dqn import train_dqn, evaluate_policy
from .combined import CombinedConfig, train_combined
