"""Exact tools for strongly equitable list colouring of sparse graphs."""
__version__ = "0.1.0"
