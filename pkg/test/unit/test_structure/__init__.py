"""
Contains tests for the structure learner
"""
