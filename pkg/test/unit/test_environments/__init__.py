"""
Contains tests for the Triggers gridworld
"""
