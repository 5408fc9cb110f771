"""
Dyadic Atlas - adyacencia de retículas diádicas generales con bases distintas.

Certifica o refuta con aritmética racional exacta si una familia de d+1
retículas n-ádicas en R^d es adyacente, y contrasta los criterios con un
oráculo directo de recubrimiento.
"""

__version__ = "0.1.0"
__author__ = "Jarko"
__all__ = ["__version__"]
