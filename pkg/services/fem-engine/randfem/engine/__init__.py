# randfem - Engine Package
# Numerical core: meshes, sampling, quadrature, assembly, solvers, experiments

"""
randfem numerical engine.

The engine is layered bottom-up: ``mesh`` -> ``sampling`` -> ``quadrature`` ->
``assembly`` -> ``solver`` -> ``experiments``. Each layer only imports from the
layers below it and from ``utils``.
"""

__version__ = "1.0.0"
