"""Computational toolkit for gyrogroups and their finite topological models."""

__version__ = "0.1.0"
