"""Exact computer algebra for po(0|2k), sh(0|2k) and k^L(1|6): brackets,
Casimir elements, Verma modules and Shapovalov determinants."""

__version__ = "0.1.0"
