"""invkit - Verify invariant sets of linear dynamical systems."""

__version__ = "0.1.0"
