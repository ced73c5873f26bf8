"""Render stalab figure-reproduction CSVs to images."""

from .render import FIGURE_SCHEMAS, PlotJob, build_figure, load_columns, render

__version__ = "0.1.0"

__all__ = ["FIGURE_SCHEMAS", "PlotJob", "build_figure", "load_columns", "render"]
