"""Hodge numbers and classification of weighted complete intersections."""

__version__ = "0.1.0"

from .family import Family, parse_family  # noqa: E402

__all__ = ["Family", "parse_family", "__version__"]
