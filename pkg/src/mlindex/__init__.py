"""Isotropy and completeness indices of multilinear maps over finite fields."""

__version__ = "0.1.0"
