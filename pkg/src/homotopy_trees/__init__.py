"""Tree models for A-infinity algebras, their morphisms and polytopal realizations."""

__version__ = "0.1.0"
