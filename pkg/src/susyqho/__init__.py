"""Exactly solvable partner potentials of the quantum harmonic oscillator."""

__version__ = "0.1.0"
