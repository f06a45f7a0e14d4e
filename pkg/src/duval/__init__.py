"""Exact verification toolkit for automorphism groups of Du Val del Pezzo surfaces."""

__version__ = "0.1.0"
