"""Exact Hall-algebra computations for iquantum groups over finite fields."""

__version__ = "0.1.0"
