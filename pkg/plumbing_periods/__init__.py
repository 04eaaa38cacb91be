"""
Numerical plumbing of nodal curves with rational components: jump problems,
periods and their expansions, Schottky references and twisted differentials.
"""

__version__ = "0.1.0"
