"""
Contains tests for :mod:`csm`.
"""
