"""Exact Hall-basis Lie algebra toolkit for CR symbols and their Tanaka prolongations."""

__version__ = "0.1.0"
