"""Mod-p and rational cohomology of loop spaces of Thom spaces.

The Eilenberg-Moore spectral sequence for the loop space of a Thom space has
E2-term the bar construction on the Thom space's cohomology; it collapses
when the Euler class vanishes.  This package computes that E2-term, the
Steenrod action on it, and the resulting structure of the loop-space
cohomology.
"""

__version__ = "0.1.0"
