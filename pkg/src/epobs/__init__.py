"""Constructions and exact checks around edge-Erdős–Pósa counterexamples.

The package builds condensed walls, grid, ladder and tree obstruction graphs
and verifies their small-scale properties with exhaustive searches that emit
certificates.
"""

__version__ = "0.1.0"
