"""Exact tools for common-neighbourhood extremal problems on triangle-free regular graphs."""
__version__ = "0.1.0"
