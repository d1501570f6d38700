"""Headless renderer for homsim scenario CSVs."""

__version__ = "0.1.0"

from .render import ColumnMismatchError, FigureSpec, read_table, render

__all__ = ["__version__", "ColumnMismatchError", "FigureSpec", "read_table", "render"]
