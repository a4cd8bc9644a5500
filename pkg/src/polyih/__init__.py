"""Intersection homology of filtered simplicial complexes under the polyhedral
and skeleton allowability notions."""

__version__ = "0.1.0"
