"""Offline figure rendering for ilnlab output files.

The only coupling to the experiment library is through its file formats:
the fixed-schema sweep CSV and the construction-report JSON.
"""

from .render import (FIGURE_KINDS, SWEEP_COLUMNS, SchemaError,
                     construction_bar_data, floor_lines, load_construction,
                     load_sweep_csv, render)

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "SWEEP_COLUMNS", "SchemaError",
           "construction_bar_data", "floor_lines", "load_construction",
           "load_sweep_csv", "render"]
