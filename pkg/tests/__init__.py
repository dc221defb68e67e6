"""
rotinv test suite.
"""
