"""Exact-arithmetic workbench for modified quantum difference Toda systems."""

__version__ = "1.0.0"
