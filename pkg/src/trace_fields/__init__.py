"""
Trace Fields - SU(2,1) trace fields toolkit.

Classifies elements of SU(2,1), reconstructs group matrices from trace data,
conjugates irreducible groups over their trace fields and detects
R-Fuchsian / C-Fuchsian structure.
"""

__version__ = "0.1.0"
