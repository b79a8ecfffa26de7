"""Exact-dynamics simulation and analysis of hybrid fixed-point /
trial-and-error quantum search with an unknown fraction of targets."""

__version__ = "0.1.0"
