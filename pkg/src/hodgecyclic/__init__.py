"""Hodge decomposition of cyclic and Hochschild homology of universal
enveloping algebras, computed exactly from Koszul-dual cobar models."""

__version__ = "0.1.0"
