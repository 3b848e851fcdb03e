"""Exact chain-level algebra for homotopy-orbit computations.

Everything is computed with exact coefficients (integers, rationals or a
prime field) on explicitly truncated graded modules.  The layers, bottom
up: sparse exact linear algebra, free graded modules with centralized
Koszul signs, chain complexes with homology, DG (co)algebras and Hopf
algebras, bar and cobar constructions, twisting cochains, coherent
comultiplicative families with semifree lifting, circle actions with their
orbit models, and simplicial sets.  The cli module exposes all of it as a
batch command line over a versioned document format.
"""

__version__ = "0.1.0"

from .rings import CoeffRing, QQ, ZZ
