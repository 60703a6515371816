"""Arithmetic sieve and verification tools for block-transitive Steiner 3-designs
with an exceptional socle of Lie type."""

__version__ = "0.1.0"
