"""
Contains the model-predictive planner: dynamics models on attribute vectors,
the oracles that roll them out over whole world states, and random shooting
"""
from .dynamics import LearnedDynamics, RuleDynamics
from .oracles import GroundTruthOracle, ModelOracle
from .shooting import PlanConfig, rollout_value, candidate_sequences
from .shooting import best_sequence, shoot, iterate_plan, plan_phase
