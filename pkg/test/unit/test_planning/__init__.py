"""
Contains tests for the model-predictive planner
"""
