"""
Contains unit tests for :mod:`csm`. Unit tests are automated tests that are
meant to test a single component in isolation from other components.
"""
