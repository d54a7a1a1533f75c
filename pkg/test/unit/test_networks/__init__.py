"""
Contains tests for the approximator engine
"""
