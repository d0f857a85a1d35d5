"""Iso-entangled bases: local-unitary images of a multipartite state that form an orthonormal basis."""

__version__ = "0.1.0"
