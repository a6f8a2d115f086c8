"""Figure renderer for qsdlab sweep CSVs.

Reads the self-describing CSV tables the qsdlab CLI writes and renders
them into publication-style figure panels.  All curves come from CSV
columns; no physics is recomputed here.
"""

from .panels import PANELS, render_panel
from .reader import SchemaError, SweepTable, read_table

__all__ = ["PANELS", "SchemaError", "SweepTable", "read_table", "render_panel"]

__version__ = "1.0.0"
