"""Numerical audit of a sum-of-principal-logarithms construction."""
