"""Wigner functions of one- and two-body systems and their exchange statistics."""

__version__ = "0.1.0"
