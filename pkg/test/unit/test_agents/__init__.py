"""
Contains tests for the Q-learning agents
"""
