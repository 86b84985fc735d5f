"""Ribbon graphs, odd homology of their double covers, Whitehead moves and
Boutroux-curve monodromy of the tautological line bundles."""

__version__ = "0.1.0"
