"""Exact computational algebra for linking forms, C_p-modules, coverings and
finite group cohomology."""

__version__ = "0.1.0"
