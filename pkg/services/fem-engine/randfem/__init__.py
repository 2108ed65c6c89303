"""
randfem - Finite elements with randomized quadrature for elliptic problems
"""

__version__ = "1.0.0"
__author__ = "randfem developers"
__description__ = (
    "P1 finite elements with stratified Monte Carlo and importance sampling quadrature"
)
