"""
Contains tests for structure mapping
"""
