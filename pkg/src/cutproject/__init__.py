"""Exact toolkit for cut-and-project sets whose internal space is a circle rotation."""

__version__ = "0.1.0"
