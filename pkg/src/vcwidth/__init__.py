"""Width bounds and training harness for single-hidden-layer sigmoid networks."""

__version__ = "0.1.0"
