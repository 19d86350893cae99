"""Noether-Lefschetz numbers of 1-parameter K3 families from modular forms and mirror symmetry."""

__version__ = "0.1.0"
