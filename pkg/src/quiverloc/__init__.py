"""Finitely presented algebras as universal localizations of quiver algebras,
with exact verification and Tor computations over lower triangular rings."""

__version__ = "0.1.0"
