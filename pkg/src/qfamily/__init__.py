"""Quantum families of maps into finite semigroups, verified symbolically."""

__version__ = "0.1.0"
