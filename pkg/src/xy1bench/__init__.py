"""Desk-scale workbench for Goldbach-type problems over primes of the form x^2 + y^2 + 1."""

__version__ = "0.1.0"
